"""
K-functional, the K-method and trace-method norms of (X, Y)_Phi, and the
checks that tie them together.

    K(t, x) = inf { |a|_X + t |b|_Y : x = a + b }
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from interplab.config import LabConfig
from interplab.functions.rearrangement import decreasing_rearrangement
from interplab.functions.ri_norms import cutoff_membership, min_inverse_function, phi_norm, vector_phi_norm
from interplab.models.couple import (
    Couple,
    DiagonalCouple,
    L1LinfCouple,
    LpNorm,
    SumNorm,
    TrivialCouple,
)
from interplab.models.exceptions import (
    EstimationError,
    ParameterError,
    RefinementError,
    TrivialSpaceError,
)
from interplab.models.grid import LogGrid, SampledFunction
from interplab.models.spaces import NormEstimate, PhiSpace
from interplab.models.weight import UNIT_WEIGHT
from interplab.numerics.grids import default_grid

logger = logging.getLogger(__name__)

# relative smoothing radius of the norms in the convex minimisation
_SMOOTHING = 1e-7


@dataclass
class Decomposition:
    """x = a + b with value |a|_X + t|b|_Y and a bound on its excess over K(t, x)."""

    a: np.ndarray
    b: np.ndarray
    value: float
    gap: float = 0.0
    method: str = "closed-form"


def _closed_form(couple: Couple, x: np.ndarray, t: float) -> Optional[Decomposition]:
    if isinstance(couple, TrivialCouple):
        b = x if t < 1.0 else np.zeros_like(x)
        return Decomposition(x - b, b, min(1.0, t) * float(couple.norm(x)))
    if isinstance(couple, DiagonalCouple) and couple.exponent == 1.0:
        to_b = t * couple.mu <= 1.0
        b = np.where(to_b, x, 0.0)
        value = float(np.sum(np.minimum(1.0, t * couple.mu) * np.abs(x)))
        return Decomposition(x - b, b, value)
    return None


def _l1linf_decomposition(couple: L1LinfCouple, x: np.ndarray, t: float) -> Decomposition:
    f = couple.function(x)
    rr = decreasing_rearrangement(f, UNIT_WEIGHT)
    level = float(rr(t))
    values = np.asarray(f.values)
    b = np.sign(values) * np.minimum(np.abs(values), level)
    return Decomposition(values - b, b, rr.integral_up_to(t))


def _norm_parts(norm) -> Optional[List[LpNorm]]:
    if isinstance(norm, LpNorm):
        return [norm] if norm.is_polyhedral else None
    if isinstance(norm, SumNorm):
        return list(norm.parts) if norm.is_polyhedral else None
    return None


def _linear_rows(norm: LpNorm, dim: int) -> np.ndarray:
    rows = np.eye(dim) if norm.transform is None else np.asarray(norm.transform, dtype=float)
    if norm.weights is not None:
        rows = rows * norm.weights[:, None]
    return rows


def _linear_program(x_parts: List[LpNorm], y_parts: List[LpNorm], x: np.ndarray, t: float) -> np.ndarray:
    """
    Minimise |x - b|_X + t|b|_Y for polyhedral norms as a linear program in (b, slacks).

    An l1 part contributes one slack per row, an l-inf part a single slack
    bounding every row.
    """
    dim = len(x)
    blocks = []
    for parts, coeff, sign in ((x_parts, 1.0, -1.0), (y_parts, t, 1.0)):
        for part in parts:
            rows = _linear_rows(part, dim)
            offset = rows @ x if sign < 0 else np.zeros(len(rows))
            blocks.append((rows * sign, offset, coeff, math.isinf(part.exponent)))

    n_slack = sum(1 if sup else len(rows) for rows, _, _, sup in blocks)
    cost = np.zeros(dim + n_slack)
    a_ub = []
    b_ub = []
    col = dim
    for rows, offset, coeff, sup in blocks:
        k = len(rows)
        slack = np.zeros((k, n_slack))
        if sup:
            slack[:, col - dim] = 1.0
            cost[col] = coeff
            col += 1
        else:
            slack[:, col - dim:col - dim + k] = np.eye(k)
            cost[col:col + k] = coeff
            col += k
        # |offset + rows b| <= slack, both signs
        a_ub.append(np.hstack([rows, -slack]))
        b_ub.append(-offset)
        a_ub.append(np.hstack([-rows, -slack]))
        b_ub.append(offset)
    bounds = [(None, None)] * dim + [(0, None)] * n_slack
    result = optimize.linprog(cost, A_ub=np.vstack(a_ub), b_ub=np.concatenate(b_ub), bounds=bounds, method="highs")
    if result.status != 0:
        raise EstimationError("Linear program for the K-functional failed", {"status": result.status,
                                                                           "message": result.message})
    return np.asarray(result.x[:dim])


def _objective(couple: Couple, x: np.ndarray, t: float):
    def value(b: np.ndarray) -> float:
        return float(couple.x_norm(x - b)) + t * float(couple.y_norm(b))
    return value


def _embed(b: np.ndarray, complex_space: bool) -> np.ndarray:
    return np.concatenate([b.real, b.imag]) if complex_space else np.asarray(b, dtype=float)


def _unembed(z: np.ndarray, complex_space: bool) -> np.ndarray:
    if not complex_space:
        return z
    half = len(z) // 2
    return z[:half] + 1j * z[half:]


def _numeric_decomposition(couple: Couple, x: np.ndarray, t: float, restarts: int,
                           warm: Optional[np.ndarray], rng: np.random.Generator) -> Decomposition:
    """
    Smoothed convex minimisation from the natural splits, a warm start and
    seeded random starts, each polished on the exact objective.

    The gap is the spread between the two best restarts plus the smoothing bound.
    """
    if couple.dim > LabConfig.K_MAX_DIM:
        raise ParameterError(
            f"Numerical K-functional supports dimension <= {LabConfig.K_MAX_DIM}, got {couple.dim}"
        )
    exact = _objective(couple, x, t)
    complex_space = np.iscomplexobj(x)
    upper = min(exact(np.zeros_like(x)), exact(x))
    if upper == 0.0:
        return Decomposition(np.zeros_like(x), np.zeros_like(x), 0.0, method="numeric")

    x_norm, y_norm = couple.norms
    smooth = hasattr(x_norm, "smoothed") and hasattr(y_norm, "smoothed")
    eps_x = _SMOOTHING * upper
    eps_y = eps_x / t
    smoothing_bound = 0.0
    if smooth:
        smoothing_bound = x_norm.smoothing_bound(eps_x, couple.dim) + t * y_norm.smoothing_bound(eps_y, couple.dim)

        def surrogate(z: np.ndarray) -> float:
            b = _unembed(z, complex_space)
            return float(x_norm.smoothed(x - b, eps_x)) + t * float(y_norm.smoothed(b, eps_y))
    else:
        def surrogate(z: np.ndarray) -> float:
            return exact(_unembed(z, complex_space))

    starts = [np.zeros_like(x), x.copy()]
    if warm is not None:
        starts.append(np.asarray(warm, dtype=x.dtype))
    scale = np.abs(x).max()
    for _ in range(restarts):
        draw = rng.standard_normal(len(x)) * scale
        if complex_space:
            draw = draw + 1j * rng.standard_normal(len(x)) * scale
        starts.append(draw)

    candidates = []
    for start in starts:
        z0 = _embed(start, complex_space)
        if smooth:
            z0 = optimize.minimize(surrogate, z0, method="BFGS").x
        polished = optimize.minimize(lambda z: exact(_unembed(z, complex_space)), z0, method="Powell",
                                     options={"xtol": 1e-10, "ftol": 1e-12})
        b = _unembed(polished.x, complex_space)
        candidates.append((exact(b), b))
    candidates.append((exact(np.zeros_like(x)), np.zeros_like(x)))
    candidates.append((exact(x), x.copy()))
    candidates.sort(key=lambda item: item[0])
    best_value, best_b = candidates[0]
    spread = candidates[1][0] - best_value if len(starts) > 1 else 0.0
    gap = spread + smoothing_bound
    if gap > LabConfig.K_GAP_TOLERANCE * best_value:
        raise EstimationError(
            f"K-functional optimisation did not certify a relative gap below {LabConfig.K_GAP_TOLERANCE:g}",
            {"t": t, "value": best_value, "gap": gap, "restart_values": [v for v, _ in candidates]},
        )
    return Decomposition(x - best_b, best_b, best_value, gap, "numeric")


def decompose(couple: Couple, x, t: float, restarts: Optional[int] = None,
              warm: Optional[np.ndarray] = None) -> Decomposition:
    """
    Near-optimal splitting x = a + b for K(t, x).

    Trivial and l1 diagonal couples and (L1, L-inf) are solved in closed
    form, real polyhedral norms by a linear program, the rest numerically.

    Raises:
        ParameterError: for t <= 0 or an invalid vector
        EstimationError: if the numerical optimiser cannot certify its gap
    """
    if not (t > 0 and math.isfinite(t)):
        raise ParameterError(f"K-functional needs a finite t > 0, got {t}")
    if isinstance(couple, L1LinfCouple):
        return _l1linf_decomposition(couple, x, t)
    x = couple.vector(x)
    closed = _closed_form(couple, x, t)
    if closed is not None:
        return closed
    x_side, y_side = couple.norms
    x_parts = _norm_parts(x_side)
    y_parts = _norm_parts(y_side)
    if x_parts is not None and y_parts is not None and not np.iscomplexobj(x) \
            and not any(p.is_complex for p in x_parts + y_parts):
        b = _linear_program(x_parts, y_parts, x, t)
        value = _objective(couple, x, t)(b)
        natural = min(float(couple.x_norm(x)), t * float(couple.y_norm(x)))
        if natural <= value:
            b = np.zeros_like(x) if float(couple.x_norm(x)) <= t * float(couple.y_norm(x)) else x.copy()
            value = natural
        return Decomposition(x - b, b, value, method="linear-program")
    restarts = LabConfig.K_RESTARTS if restarts is None else restarts
    return _numeric_decomposition(couple, x, t, restarts, warm, LabConfig.make_rng(11))


def k_functional(couple: Couple, x, t: float) -> float:
    """K(t, x)."""
    return decompose(couple, x, t).value


def optimal_decomposition(couple: Couple, x, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """(a, b) with a + b = x and |a|_X + t|b|_Y <= 2 K(t, x)."""
    found = decompose(couple, x, t)
    return found.a, found.b


def sum_norm(couple: Couple, x) -> float:
    """|x|_{X+Y} = K(1, x)."""
    return k_functional(couple, x, 1.0)


def intersection_norm(couple: Couple, x) -> float:
    """|x|_{X cap Y} = max(|x|_X, |x|_Y)."""
    if not isinstance(couple, L1LinfCouple):
        x = couple.vector(x)
    return max(float(couple.x_norm(x)), float(couple.y_norm(x)))


def _k_values(couple: Couple, x, ts: np.ndarray) -> Tuple[np.ndarray, float]:
    """K(t, x) at every t; numeric couples are solved on a coarse log grid and interpolated in log-log."""
    if isinstance(couple, TrivialCouple):
        return np.minimum(1.0, ts) * float(couple.norm(couple.vector(x))), 0.0
    if isinstance(couple, DiagonalCouple) and couple.exponent == 1.0:
        x = np.abs(couple.vector(x))
        return np.minimum(1.0, np.multiply.outer(ts, couple.mu)) @ x, 0.0
    if isinstance(couple, L1LinfCouple):
        rr = decreasing_rearrangement(couple.function(x), UNIT_WEIGHT)
        return np.array([rr.integral_up_to(float(t)) for t in ts]), 0.0

    lo, hi = math.log10(ts[0]), math.log10(ts[-1])
    count = max(int(math.ceil((hi - lo) * LabConfig.K_NODES_PER_DECADE)) + 1, 2)
    coarse = np.geomspace(ts[0], ts[-1], count)
    values = np.empty(count)
    gap = 0.0
    warm = None
    for i, t in enumerate(coarse):
        found = decompose(couple, x, float(t), restarts=0 if warm is not None else None, warm=warm)
        values[i] = found.value
        gap = max(gap, found.gap / found.value if found.value else 0.0)
        warm = found.b
    logger.debug("K solved at %d coarse nodes, worst relative gap %.3e", count, gap)
    if np.any(values <= 0):
        return np.interp(np.log(ts), np.log(coarse), values), gap
    return np.exp(np.interp(np.log(ts), np.log(coarse), np.log(values))), gap


def k_curve(couple: Couple, x, grid: Optional[LogGrid] = None) -> SampledFunction:
    """t -> K(t, x) sampled on the grid."""
    grid = grid or default_grid()
    values, _ = _k_values(couple, x, grid.nodes)
    return SampledFunction(grid, values)


def _require_nontrivial(space: PhiSpace) -> None:
    membership = cutoff_membership(space)
    if membership.min_inverse is False:
        raise TrivialSpaceError(
            "min(1, 1/t) is not in the parameter space, so the interpolation space is {0}"
        )


def k_method_norm(couple: Couple, space: PhiSpace, x, grid: Optional[LogGrid] = None) -> NormEstimate:
    """
    |x|_{(X,Y)_Phi} = |t -> K(t, x)/t|_Phi.

    Raises:
        TrivialSpaceError: if min(1, 1/t) is not in Phi
    """
    _require_nontrivial(space)
    grid = grid or default_grid()
    values, gap = _k_values(couple, x, grid.nodes)
    if not np.any(values):
        return NormEstimate(0.0, quasi_norm=space.base.quasi_norm)
    estimate = phi_norm(space, SampledFunction(grid, values / grid.nodes))
    return NormEstimate(estimate.value, estimate.tail_bound, gap * estimate.value, estimate.quasi_norm)


def embedding_bracket(couple: Couple, space: PhiSpace, x, grid: Optional[LogGrid] = None) -> Dict[str, float]:
    """
    min(1, 1/t) |x|_{X+Y} <= K(t, x)/t <= min(1, 1/t) |x|_{X cap Y}, taken in Phi.
    """
    _require_nontrivial(space)
    grid = grid or default_grid()
    cutoff = phi_norm(space, min_inverse_function(grid)).value
    return {
        "lower": cutoff * sum_norm(couple, x),
        "value": k_method_norm(couple, space, x, grid).value,
        "upper": cutoff * intersection_norm(couple, x),
    }


@dataclass
class TraceFunction:
    """
    u = Pv for the step function v of the decompositions b(s_k), with its
    derivative u' = (v - u)/t sampled on a grid.

    v equals pieces[k] on (times[k + 1], times[k]], the last piece also on
    (0, times[-1]], and 0 beyond times[0] = 1.
    """

    u: SampledFunction
    du: SampledFunction
    x: np.ndarray
    times: np.ndarray
    pieces: np.ndarray
    initial_error: float = 0.0

    def _mass_up_to(self, t: float) -> np.ndarray:
        """Integral of v over (0, t)."""
        times = self.times
        mass = self.pieces[-1] * min(t, times[-1])
        for k in range(len(times) - 1):
            lo, hi = times[k + 1], times[k]
            if t > lo:
                mass = mass + self.pieces[k] * (min(t, hi) - lo)
        return mass

    def value_at(self, t: float) -> np.ndarray:
        if t <= self.times[-1]:
            return self.pieces[-1].copy()
        return self._mass_up_to(t) / t

    def v_at(self, t: float) -> np.ndarray:
        if t > self.times[0]:
            return np.zeros_like(self.pieces[-1])
        k = int(np.searchsorted(-self.times, -t, side="right")) - 1
        return self.pieces[min(max(k, 0), len(self.pieces) - 1)]


def _finite_dim_only(couple: Couple) -> None:
    if isinstance(couple, L1LinfCouple):
        raise ParameterError("The trace construction supports finite-dimensional couples only")


def trace_construction(couple: Couple, space: PhiSpace, x, grid: Optional[LogGrid] = None) -> TraceFunction:
    """
    Build an admissible u with u(0) = x from decompositions at s_k = r^-k.

    The times run from 1 down past t_min until |a(s_k)|_X is below the
    initial-value tolerance; u(t_min) is then checked against x in X + Y.

    Raises:
        ParameterError: for x = 0 or a function-space couple
        RefinementError: if the depth bound is reached first
    """
    _finite_dim_only(couple)
    _require_nontrivial(space)
    grid = grid or default_grid()
    x = couple.vector(x)
    if not np.any(x):
        raise ParameterError("The trace construction needs a nonzero x")
    ratio = LabConfig.TRACE_THINNING_RATIO
    tolerance = LabConfig.TRACE_INITIAL_TOLERANCE
    reference = sum_norm(couple, x)
    floor = min(grid.t_min, 1.0 / LabConfig.TRACE_MAX_DEPTH) / ratio

    times = [1.0]
    pieces = []
    warm = None
    s = 1.0
    while True:
        s_next = s / ratio
        found = decompose(couple, x, s_next, restarts=0 if warm is not None else None, warm=warm)
        warm = found.b
        times.append(s_next)
        pieces.append(found.b)
        s = s_next
        if s < grid.t_min and float(couple.x_norm(found.a)) <= tolerance * reference:
            break
        if s < floor:
            raise RefinementError(
                f"Decompositions did not converge to x before t = {floor:.3g}: "
                f"|a|_X = {float(couple.x_norm(found.a)):.3g}"
            )
    times_arr = np.array(times)
    pieces_arr = np.array(pieces)
    nodes = grid.nodes
    trace = TraceFunction(SampledFunction.zeros(grid, len(x)), SampledFunction.zeros(grid, len(x)),
                          x, times_arr, pieces_arr)

    # exact running integral of v at the nodes
    u = np.array([trace.value_at(float(t)) for t in nodes])
    v = np.array([trace.v_at(float(t)) for t in nodes])
    du = (v - u) / nodes[:, None]
    trace.u = SampledFunction(grid, u)
    trace.du = SampledFunction(grid, du)
    trace.initial_error = k_functional(couple, u[0] - x, 1.0) if np.any(u[0] - x) else 0.0
    if trace.initial_error > tolerance * reference:
        raise RefinementError(
            f"|u(t_min) - x|_(X+Y) = {trace.initial_error:.3g} exceeds {tolerance:g} |x|_(X+Y)"
        )
    logger.debug("trace built from %d decompositions", len(pieces))
    return trace


def trace_method_norm(couple: Couple, space: PhiSpace, x, grid: Optional[LogGrid] = None) -> NormEstimate:
    """|u|_{Phi(Y)} + |u'|_{Phi(X)} for the constructed trace, an upper bound for the trace norm."""
    _finite_dim_only(couple)
    x = couple.vector(x)
    if not np.any(x):
        return NormEstimate(0.0, quasi_norm=space.base.quasi_norm)
    trace = trace_construction(couple, space, x, grid)
    u_part = vector_phi_norm(space, trace.u, couple.y_norm)
    du_part = vector_phi_norm(space, trace.du, couple.x_norm)
    return NormEstimate(
        u_part.value + du_part.value,
        u_part.tail_bound + du_part.tail_bound,
        quasi_norm=space.base.quasi_norm,
        details={"u_norm": u_part.value, "du_norm": du_part.value, "initial_error": trace.initial_error},
    )


def _operator_norm(norm, matrix: np.ndarray, dim: int, rng: np.random.Generator) -> Tuple[float, bool]:
    """|T| on (R^d, norm); exact for untransformed l1, l2 and l-inf norms, else a probe estimate."""
    if isinstance(norm, LpNorm) and norm.transform is None and norm.exponent in (1.0, 2.0, math.inf):
        w = np.ones(dim) if norm.weights is None else norm.weights
        conjugated = (w[:, None] * matrix) / w[None, :]
        order = {1.0: 1, 2.0: 2, math.inf: np.inf}[norm.exponent]
        return float(np.linalg.norm(conjugated, order)), True
    probes = np.vstack([np.eye(dim), rng.standard_normal((64, dim))])
    ratios = np.asarray(norm(probes @ matrix.T)) / np.asarray(norm(probes))
    return float(ratios.max()), False


@dataclass
class InterpolationCheck:
    """k_method_norm(Tx) <= max(|T|_X, |T|_Y) k_method_norm(x) over a sample."""

    bound: float
    exact_norms: bool
    ratios: List[float] = field(default_factory=list)
    holds: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bound": self.bound,
            "exact_operator_norms": self.exact_norms,
            "max_ratio": max(self.ratios) if self.ratios else 0.0,
            "holds": self.holds,
        }


def operator_interp_check(couple: Couple, space: PhiSpace, matrix, xs: Sequence,
                          grid: Optional[LogGrid] = None, slack: float = 1e-6) -> InterpolationCheck:
    """
    Compare the interpolation norm of Tx with max(|T|_X, |T|_Y) times that of x.
    """
    _finite_dim_only(couple)
    matrix = np.atleast_2d(np.asarray(matrix))
    if matrix.shape != (couple.dim, couple.dim):
        raise ParameterError(f"T must be {couple.dim}x{couple.dim}, got {matrix.shape}")
    grid = grid or default_grid()
    rng = LabConfig.make_rng(13)
    x_side, y_side = couple.norms
    tx, exact_x = _operator_norm(x_side, matrix, couple.dim, rng)
    ty, exact_y = _operator_norm(y_side, matrix, couple.dim, rng)
    check = InterpolationCheck(max(tx, ty), exact_x and exact_y)
    for x in xs:
        x = couple.vector(x)
        base = k_method_norm(couple, space, x, grid).value
        if base == 0:
            continue
        image = k_method_norm(couple, space, matrix @ x, grid).value
        ratio = image / base
        check.ratios.append(ratio)
        if ratio > check.bound * (1 + slack):
            check.holds = False
            logger.warning("interpolation inequality fails: ratio %.6g > bound %.6g", ratio, check.bound)
    return check
