"""
Functional calculus of sectorial matrices by contour quadrature, and the
functional-calculus representations of the norms of (X, dom A)_Phi.

The contour runs from infinity e^{i beta} to 0 and back out to infinity
e^{-i beta}, so that for A = (lambda)

    f(A) = 1/(2 pi i) int f(z) R(z, A) dz = f(lambda).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from interplab.config import LabConfig
from interplab.functions.hardy import calderon_classification
from interplab.functions.ri_norms import phi_norm
from interplab.models.couple import DomainCouple, LpNorm
from interplab.models.exceptions import (
    ContourRangeError,
    DomainError,
    InterpLabError,
    InvertibilityError,
    ParameterError,
)
from interplab.models.grid import LogGrid, SampledFunction
from interplab.models.operator import Contour, EClassFunction, H0Function, HInfFunction, SectorialOperator
from interplab.models.spaces import NormEstimate, PhiSpace
from interplab.numerics.grids import default_grid
from interplab.numerics.linalg import mat_exp, solve_resolvent, solve_shifted, step_matrices

logger = logging.getLogger(__name__)

# t values evaluated per block when a contour is reused over a grid
_T_CHUNK = 256
_PROFILE_SAMPLES_PER_DECADE = 10
_PROFILE_DECADES = 8
# ratios below this fraction of the largest one count as 0
_NEGLIGIBLE_RATIO = 1e-12


def sector_profile(operator: SectorialOperator, angle: float, samples_per_decade: int = _PROFILE_SAMPLES_PER_DECADE,
                   decades: float = _PROFILE_DECADES) -> float:
    """
    max |lambda R(lambda, A)| over lambda on the rays arg = +-angle and the
    negative axis, |lambda| log-uniform in rho 10^-decades .. rho 10^decades.

    Raises:
        ParameterError: if angle is not in (0, pi)
        SingularityError: if a sampled lambda lies in the spectrum
    """
    if not (0 < angle < math.pi):
        raise ParameterError(f"Sector angle must lie in (0, pi), got {angle}")
    radii = operator.rho * np.geomspace(10.0 ** -decades, 10.0 ** decades, int(2 * decades * samples_per_decade) + 1)
    best = 0.0
    for direction in (np.exp(1j * angle), np.exp(-1j * angle), -1.0):
        for r in radii:
            lam = r * direction
            best = max(best, abs(lam) * float(np.linalg.norm(solve_resolvent(operator.matrix, lam), 2)))
    return best


def _function_angle(operator: SectorialOperator, f) -> float:
    cap = getattr(f, "sector_angle", math.pi)
    return operator.working_angle(cap=cap)


def default_contour(operator: SectorialOperator, f=None) -> Contour:
    """Rays at the angle midway between the spectrum and the working sector, rho 1e-6 .. rho 1e6."""
    phi = _function_angle(operator, f)
    beta = 0.5 * (operator.angle_estimate + phi)
    spread = 10.0 ** LabConfig.CONTOUR_DECADES
    return Contour(beta, operator.rho / spread, operator.rho * spread, LabConfig.CONTOUR_NODES_PER_DECADE)


def _decay_mass(f: H0Function, lo: float, hi: float) -> float:
    """int_lo^hi of the declared bound of |f(r)| against dr/r."""
    s, s_inf = f.decay, f.infinity_decay
    total = 0.0
    a, b = lo, min(hi, 1.0)
    if a < b:
        total += (b ** s - a ** s) / s
    a, b = max(lo, 1.0), hi
    if a < b and not math.isinf(s_inf):
        total += (a ** -s_inf - (b ** -s_inf if math.isfinite(b) else 0.0)) / s_inf
    return f.constant * total


def _truncation_bound(f: H0Function, profile: float, r_min: float, r_max: float, t_lo: float, t_hi: float) -> float:
    """Bound for the parts of both rays outside [r_min, r_max], uniformly for t in [t_lo, t_hi]."""
    below = _decay_mass(f, 0.0, t_hi * r_min)
    above = _decay_mass(f, t_lo * r_max, math.inf)
    return profile * (below + above) / math.pi


def _fit_contour(f: H0Function, operator: SectorialOperator, contour: Contour, t_lo: float, t_hi: float,
                 scale: float) -> Tuple[Contour, float]:
    """
    Widen the contour decade by decade at each end until the truncation
    bound is below tolerance.

    Raises:
        ContourRangeError: if 40 extra decades at an end do not suffice
    """
    profile = sector_profile(operator, contour.beta)
    tolerance = LabConfig.CALCULUS_TOLERANCE * max(scale, 1.0)
    r_min = contour.r_min / t_hi
    r_max = contour.r_max / t_lo
    lower = upper = 0
    while True:
        bound = _truncation_bound(f, profile, r_min / 10.0 ** lower, r_max * 10.0 ** upper, t_lo, t_hi)
        if bound <= tolerance:
            break
        below = _truncation_bound(f, profile, r_min / 10.0 ** lower, math.inf, t_lo, t_hi)
        if below > 0.5 * tolerance:
            lower += 1
        else:
            upper += 1
        if max(lower, upper) > LabConfig.CONTOUR_MAX_DECADES:
            raise ContourRangeError(
                f"Truncation bound {bound:.3e} stays above {tolerance:.1e} after "
                f"{LabConfig.CONTOUR_MAX_DECADES} extra decades; decay exponent too small for {f.name or 'f'}"
            )
    fitted = Contour(contour.beta, r_min / 10.0 ** lower, r_max * 10.0 ** upper, contour.nodes_per_decade)
    logger.debug("contour %s, truncation bound %.3e", fitted.describe(), bound)
    return fitted, bound


def _contour_apply(f: H0Function, operator: SectorialOperator, rhs: np.ndarray, ts: np.ndarray,
                   contour: Optional[Contour] = None) -> np.ndarray:
    """
    f(tA) @ rhs for every t, from one set of resolvent solves R(z_k, A) rhs.

    Returns an array of shape (len(ts), d, k).
    """
    if operator.angle_estimate >= f.sector_angle:
        raise ParameterError(f"{f.name or 'f'} is not holomorphic on a sector containing the spectrum")
    contour = contour or default_contour(operator, f)
    if not (operator.angle_estimate < contour.beta < f.sector_angle):
        raise ParameterError(
            f"Contour angle {contour.beta:.4g} must lie between the spectral angle "
            f"{operator.angle_estimate:.4g} and the sector angle {f.sector_angle:.4g}"
        )
    scale = float(np.abs(rhs).max()) if rhs.size else 1.0
    contour, _ = _fit_contour(f, operator, contour, float(ts.min()), float(ts.max()), scale)
    radii = contour.radii
    h = contour.log_step
    weights = np.full(len(radii), h)
    weights[[0, -1]] *= 0.5
    up = np.exp(1j * contour.beta)
    down = np.exp(-1j * contour.beta)

    solves_up = np.array([solve_shifted(operator.matrix, r * up, rhs) for r in radii])
    solves_down = np.array([solve_shifted(operator.matrix, r * down, rhs) for r in radii])
    result = np.empty((len(ts),) + rhs.shape, dtype=complex)
    for start in range(0, len(ts), _T_CHUNK):
        block = ts[start:start + _T_CHUNK]
        z_up = np.multiply.outer(block, radii * up)
        z_down = np.multiply.outer(block, radii * down)
        coeff_up = f(z_up) * (weights * radii * up)
        coeff_down = f(z_down) * (weights * radii * down)
        result[start:start + len(block)] = (
            np.tensordot(coeff_down, solves_down, axes=(1, 0)) - np.tensordot(coeff_up, solves_up, axes=(1, 0))
        ) / (2j * math.pi)
    return result


def _maybe_real(operator: SectorialOperator, m: np.ndarray) -> np.ndarray:
    if not operator.is_complex and np.abs(m.imag).max(initial=0.0) <= 1e-12 * max(np.abs(m).max(initial=0.0), 1.0):
        return m.real
    return m


def calc_h0(f: H0Function, operator: SectorialOperator, contour: Optional[Contour] = None) -> np.ndarray:
    """
    f(A) by trapezoidal quadrature in log r along both rays.

    Raises:
        ContourRangeError: if the truncation bound cannot be met
        SingularityError: if the contour meets the spectrum
    """
    identity = np.eye(operator.dim, dtype=complex)
    value = _contour_apply(f, operator, identity, np.ones(1), contour)[0]
    return _maybe_real(operator, value)


def calc_e(f: EClassFunction, operator: SectorialOperator, contour: Optional[Contour] = None) -> np.ndarray:
    """f0(A) + lambda (I + A)^-1 + mu I."""
    dim = operator.dim
    value = np.asarray(f.constant * np.eye(dim), dtype=complex)
    if f.resolvent_coeff:
        value = value + f.resolvent_coeff * np.linalg.solve(np.eye(dim) + operator.matrix, np.eye(dim))
    if f.h0 is not None:
        value = value + calc_h0(f.h0, operator, contour)
    return _maybe_real(operator, value)


def _regularized(f: HInfFunction, phi: float) -> H0Function:
    """f e with e(z) = z/(1+z)^2, an H0 function of decay 1 on S_phi."""
    bound = f.sup_bound(phi) / math.cos(0.5 * phi) ** 2
    return H0Function(lambda z: f(z) * z / (1.0 + z) ** 2, 1.0, bound, f"({f.name})e",
                      sector_angle=f.sector_angle)


def calc_hinf(f: HInfFunction, operator: SectorialOperator, contour: Optional[Contour] = None) -> np.ndarray:
    """
    f(A) = A^-1 (I + A)^2 (f e)(A).

    Raises:
        InvertibilityError: if A is singular
    """
    if not operator.invertible:
        raise InvertibilityError("The regularized H-infinity calculus needs an invertible operator")
    phi = _function_angle(operator, f)
    regular = calc_h0(_regularized(f, phi), operator, contour)
    shift = np.eye(operator.dim) + operator.matrix
    value = np.linalg.solve(operator.matrix, shift @ shift @ regular)
    return _maybe_real(operator, value)


def apply_function(f, operator: SectorialOperator, contour: Optional[Contour] = None) -> np.ndarray:
    """f(A) through the calculus matching the type of f."""
    if isinstance(f, H0Function):
        return calc_h0(f, operator, contour)
    if isinstance(f, EClassFunction):
        return calc_e(f, operator, contour)
    if isinstance(f, HInfFunction):
        return calc_hinf(f, operator, contour)
    raise ParameterError(f"Unsupported function type {type(f).__name__}")


def _scaled_images(f, operator: SectorialOperator, ts: np.ndarray, x: np.ndarray,
                   closed_form: bool = True) -> np.ndarray:
    """Rows f(tA) x for t in ts; closed_form=False forces the contour calculus."""
    if closed_form and getattr(f, "matrix_form", None) is not None:
        return np.array([f.matrix_form(t * operator.matrix) @ x for t in ts])
    if isinstance(f, H0Function):
        return _contour_apply(f, operator, x[:, None].astype(complex), ts)[:, :, 0]
    if isinstance(f, EClassFunction):
        dim = operator.dim
        rows = np.array([np.linalg.solve(np.eye(dim) + t * operator.matrix, x) for t in ts])
        images = f.constant * np.asarray(x, dtype=complex)[None, :] + f.resolvent_coeff * rows
        if f.h0 is not None:
            images = images + _contour_apply(f.h0, operator, x[:, None].astype(complex), ts)[:, :, 0]
        return images
    raise ParameterError(f"Representation functions must be H0 or E-class, got {type(f).__name__}")


def _base_norm(norm: Optional[LpNorm]) -> LpNorm:
    return norm or LpNorm(1.0)


def psi_rep_norm(space: PhiSpace, operator: SectorialOperator, psi, x, include_base: Optional[bool] = None,
                 norm: Optional[LpNorm] = None, grid: Optional[LogGrid] = None,
                 admissible: bool = True, closed_form: bool = True) -> NormEstimate:
    """
    |x|_X + |t -> t^-1 |psi(tA) x|_X|_Phi.

    The base term is dropped by default when A is invertible. A psi that
    satisfies only the E-class condition (admissible=False) is accepted
    when P + Q is bounded on Phi. With closed_form=False psi(tA) comes from
    the contour calculus even when psi has a matrix_form.

    Raises:
        DomainError: for admissible=False and a space where P + Q is not known to be bounded
    """
    if not admissible and calderon_classification(space).calderon is not True:
        raise DomainError("psi satisfies only the E-class condition and P + Q is not known to be bounded on Phi")
    if operator.angle_estimate >= getattr(psi, "sector_angle", math.pi):
        raise DomainError(f"{psi.name or 'psi'} is not holomorphic on a sector containing the spectrum")
    norm = _base_norm(norm)
    grid = grid or default_grid()
    x = np.asarray(x)
    include_base = (not operator.invertible) if include_base is None else include_base
    if not np.any(x):
        return NormEstimate(0.0, quasi_norm=space.base.quasi_norm)
    images = _scaled_images(psi, operator, grid.nodes, x, closed_form)
    integrand = SampledFunction(grid, np.asarray(norm(images), dtype=float) / grid.nodes)
    estimate = phi_norm(space, integrand)
    base = float(norm(x)) if include_base else 0.0
    return NormEstimate(base + estimate.value, estimate.tail_bound, quasi_norm=estimate.quasi_norm,
                        details={"base": base, "representation": estimate.value})


def semigroup_rep_norm(space: PhiSpace, operator: SectorialOperator, x, norm: Optional[LpNorm] = None,
                       grid: Optional[LogGrid] = None) -> NormEstimate:
    """
    |x|_X + |t -> t^-1 |(e^-tA - I) x|_X|_Phi.

    Raises:
        DomainError: if -A does not generate a bounded semigroup on the grid
    """
    norm = _base_norm(norm)
    grid = grid or default_grid()
    x = np.asarray(x)
    if operator.angle_estimate >= math.pi / 2:
        raise DomainError("-A does not generate a bounded analytic semigroup (spectral angle >= pi/2)")
    if not np.any(x):
        return NormEstimate(0.0, quasi_norm=space.base.quasi_norm)
    rows = []
    worst = 0.0
    for t in grid.nodes:
        semigroup = mat_exp(operator.matrix, float(t))
        worst = max(worst, float(np.linalg.norm(semigroup, 2)))
        rows.append(semigroup @ x - x)
    if worst > LabConfig.SEMIGROUP_BOUND:
        raise DomainError(f"Semigroup norm reaches {worst:.3g} on the grid; it is not uniformly bounded")
    integrand = SampledFunction(grid, np.asarray(norm(np.array(rows)), dtype=float) / grid.nodes)
    estimate = phi_norm(space, integrand)
    base = float(norm(x))
    return NormEstimate(base + estimate.value, estimate.tail_bound, quasi_norm=estimate.quasi_norm,
                        details={"base": base, "semigroup_bound": worst, "representation": estimate.value})


def quasi_linear_decomposition(operator: SectorialOperator, x, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    x = a + b with b = t^-1 int_0^t e^-sA x ds.

    On (X, dom A) this splitting is within a constant of optimal for K(t, x).
    """
    if not (t > 0 and math.isfinite(t)):
        raise ParameterError(f"Decomposition time must be positive and finite, got {t}")
    x = np.asarray(x)
    _, w0, _ = step_matrices(operator.matrix, t)
    b = (w0 @ x) / t
    return x - b, b


def psi_admissibility(psi, angle: float, samples: int = 41) -> Dict[str, Any]:
    """
    Quantities behind the admissibility of psi on S_angle: the E-class
    declaration, |psi(z)/z| near 0 and sup |psi(sz)/(s psi(z))| over s >= 1.
    """
    if not (0 < angle < math.pi):
        raise ParameterError(f"Sector angle must lie in (0, pi), got {angle}")
    declared = isinstance(psi, (H0Function, EClassFunction))
    thetas = np.linspace(-angle, angle, 7)
    near_zero = 1e-8 * np.exp(1j * thetas)
    limit = np.abs(np.asarray(psi(near_zero)) / near_zero)
    ss = np.geomspace(1.0, 1e4, samples)
    zs = np.multiply.outer(np.geomspace(1e-4, 1e4, samples), np.exp(1j * thetas)).ravel()
    base = np.asarray(psi(zs))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.abs(np.asarray(psi(np.multiply.outer(ss, zs))) / (ss[:, None] * base[None, :]))
    finite = ratios[np.isfinite(ratios)]
    return {
        "e_class_declared": declared,
        "limit_at_zero": float(limit.mean()),
        "limit_spread": float(limit.max() - limit.min()),
        "dilation_sup": float(finite.max()) if finite.size else math.inf,
        "angle": angle,
    }


# -- catalog -----------------------------------------------------------------

def positive_diagonal(mu: Sequence[float]) -> SectorialOperator:
    mu = np.asarray(mu, dtype=float)
    if np.any(mu <= 0):
        raise ParameterError("Diagonal entries must be positive")
    return SectorialOperator(np.diag(mu), f"diag({', '.join(f'{m:g}' for m in mu)})")


def jordan_block(kappa: float) -> SectorialOperator:
    """[[1, kappa], [0, 1]], non-normal for kappa != 0."""
    return SectorialOperator(np.array([[1.0, kappa], [0.0, 1.0]]), f"jordan({kappa:g})")


def rotated_spectrum(theta: float) -> SectorialOperator:
    """Real rotation matrix with spectrum e^{+-i theta}."""
    c, s = math.cos(theta), math.sin(theta)
    return SectorialOperator(np.array([[c, -s], [s, c]]), f"rotated({theta:.4g})")


def _resolvent_form(power: int) -> Callable[[np.ndarray], np.ndarray]:
    def form(m: np.ndarray) -> np.ndarray:
        shift = np.eye(len(m)) + m
        out = m
        for _ in range(power):
            out = np.linalg.solve(shift, out)
        return out
    return form


def e_function() -> H0Function:
    """e(z) = z/(1+z)^2."""
    angle = 7 * math.pi / 8
    return H0Function(lambda z: z / (1.0 + z) ** 2, 1.0, 1.0 / math.cos(angle / 2) ** 2, "z/(1+z)^2",
                      matrix_form=_resolvent_form(2), sector_angle=angle)


def psi_exponential() -> H0Function:
    """z e^-z on S_{3pi/8}; |z e^-z| <= min(|z|, C|z|^-2) there."""
    angle = 3 * math.pi / 8
    constant = (3.0 / (math.e * math.cos(angle))) ** 3

    def form(m: np.ndarray) -> np.ndarray:
        return m @ mat_exp(m, 1.0)
    return H0Function(lambda z: z * np.exp(-z), 1.0, constant, "z*exp(-z)", decay_at_infinity=2.0,
                      matrix_form=form, sector_angle=angle)


def psi_resolvent() -> EClassFunction:
    """z/(1+z) = 1 - (1+z)^-1."""
    return EClassFunction(None, -1.0, 1.0, "z/(1+z)", matrix_form=_resolvent_form(1))


def gamma_function(alpha: float = 0.5) -> H0Function:
    """z^alpha/(1+z), 0 < alpha < 1."""
    if not 0 < alpha < 1:
        raise ParameterError(f"gamma needs 0 < alpha < 1, got {alpha}")
    angle = 7 * math.pi / 8
    return H0Function(lambda z: z ** alpha / (1.0 + z), alpha, 1.0 / math.cos(angle / 2), f"z^{alpha:g}/(1+z)",
                      decay_at_infinity=1.0 - alpha, sector_angle=angle)


def resolvent_function() -> EClassFunction:
    return EClassFunction(None, 1.0, 0.0, "(1+z)^-1",
                          matrix_form=lambda m: np.linalg.solve(np.eye(len(m)) + m, np.eye(len(m))))


def unit_function() -> EClassFunction:
    return EClassFunction(None, 0.0, 1.0, "1", matrix_form=lambda m: np.eye(len(m)))


def mobius_power(k: int) -> HInfFunction:
    """((z-1)/(z+1))^k; bounded by 1 on the right half plane and by tan(phi/2)^k beyond it."""
    if k < 0:
        raise ParameterError(f"Mobius power must be nonnegative, got {k}")

    def form(m: np.ndarray) -> np.ndarray:
        eye = np.eye(len(m))
        cayley = np.linalg.solve((m + eye).T, (m - eye).T).T
        return np.linalg.matrix_power(cayley, k)
    return HInfFunction(lambda z: ((z - 1.0) / (z + 1.0)) ** k,
                        lambda phi: max(1.0, math.tan(phi / 2)) ** k, f"((z-1)/(z+1))^{k}",
                        matrix_form=form, sector_angle=7 * math.pi / 8)


def imaginary_power(tau: float) -> HInfFunction:
    """z^{i tau}, bounded by e^{|tau| phi} on S_phi."""
    return HInfFunction(lambda z: np.exp(1j * tau * np.log(z)), lambda phi: math.exp(abs(tau) * phi),
                        f"z^(i{tau:g})")


def representation_functions() -> Dict[str, Any]:
    return {"z*exp(-z)": psi_exponential(), "z/(1+z)": psi_resolvent(), "z/(1+z)^2": e_function()}


def dore_family(name: str = "mobius") -> List[HInfFunction]:
    """Default bounded families: Mobius powers k = 0..8 or imaginary powers |tau| <= 2."""
    if name == "mobius":
        return [mobius_power(k) for k in range(9)]
    if name == "imaginary":
        return [imaginary_power(float(tau)) for tau in np.linspace(-2.0, 2.0, 9)]
    raise ParameterError(f"Unknown function family {name!r}; expected 'mobius' or 'imaginary'")


# -- reports -------------------------------------------------------------------

@dataclass
class InterpNormReport:
    """Norms of each sample vector under every representation, and the ratio brackets between them."""

    norms: Dict[str, List[float]] = field(default_factory=dict)
    skipped: Dict[str, str] = field(default_factory=dict)

    def brackets(self) -> Dict[str, Tuple[float, float]]:
        out = {}
        names = sorted(self.norms)
        for i, first in enumerate(names):
            for second in names[i + 1:]:
                ratios = np.array(self.norms[first]) / np.array(self.norms[second])
                out[f"{first}/{second}"] = (float(ratios.min()), float(ratios.max()))
        return out

    def worst_constant(self) -> float:
        worst = 1.0
        for lo, hi in self.brackets().values():
            worst = max(worst, hi, 1.0 / lo)
        return worst

    def to_dict(self) -> Dict[str, Any]:
        return {
            "norms": {name: list(values) for name, values in self.norms.items()},
            "brackets": {name: list(pair) for name, pair in self.brackets().items()},
            "worst_constant": self.worst_constant(),
            "skipped": dict(self.skipped),
        }


def interp_norm_report(operator: SectorialOperator, space: PhiSpace, xs: Sequence, norm: Optional[LpNorm] = None,
                       grid: Optional[LogGrid] = None, closed_form: bool = True) -> InterpNormReport:
    """
    K-method, trace, psi-representation and semigroup norms of every x on
    (X, dom A)_Phi.

    Raises:
        ParameterError: for an empty sample or a zero vector
    """
    from interplab.operators.couples import k_method_norm, trace_method_norm

    if not len(xs):
        raise ParameterError("interp_norm_report needs at least one sample vector")
    norm = _base_norm(norm)
    grid = grid or default_grid()
    couple = DomainCouple(operator, norm)
    vectors = [couple.vector(x) for x in xs]
    if any(not np.any(x) for x in vectors):
        raise ParameterError("Sample vectors must be nonzero")

    measures: Dict[str, Callable[[np.ndarray], float]] = {
        "k_method": lambda x: k_method_norm(couple, space, x, grid).value,
        "trace": lambda x: trace_method_norm(couple, space, x, grid).value,
        "semigroup": lambda x: semigroup_rep_norm(space, operator, x, norm, grid).value,
    }
    for name, psi in representation_functions().items():
        measures[f"psi:{name}"] = lambda x, psi=psi: psi_rep_norm(space, operator, psi, x, norm=norm, grid=grid,
                                                                  closed_form=closed_form).value

    report = InterpNormReport()
    for name, measure in measures.items():
        try:
            report.norms[name] = [measure(x) for x in vectors]
        except InterpLabError as error:
            report.skipped[name] = f"{type(error).__name__}: {error}"
            logger.warning("representation %s skipped: %s", name, error)
    return report


@dataclass
class DoreReport:
    """Normalized interpolation-norm ratios |f(A)x| / (|f|_inf |x|) per family member."""

    ratios: Dict[str, float] = field(default_factory=dict)
    sup_bounds: Dict[str, float] = field(default_factory=dict)

    @property
    def value(self) -> float:
        return max(self.ratios.values()) if self.ratios else 0.0

    @property
    def growth(self) -> float:
        """Last member's ratio over the first one's."""
        values = list(self.ratios.values())
        return values[-1] / values[0] if values and values[0] else math.nan

    @property
    def spread(self) -> float:
        """
        Largest ratio over the median; nan when the median is negligible,
        as for families whose members mostly annihilate A.
        """
        values = np.array(list(self.ratios.values()))
        if not values.size:
            return math.nan
        top, median = float(values.max()), float(np.median(values))
        if median <= _NEGLIGIBLE_RATIO * top:
            return math.nan
        return top / median

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "ratios": dict(self.ratios), "sup_bounds": dict(self.sup_bounds),
                "growth": self.growth, "spread": self.spread}


def dore_ratio(operator: SectorialOperator, space: PhiSpace, family: Sequence[HInfFunction], xs: Sequence,
               norm: Optional[LpNorm] = None, grid: Optional[LogGrid] = None) -> DoreReport:
    """
    max over x of |f(A)x|_Phi / (|f|_{H-inf(S_phi)} |x|_Phi) for every f,
    the interpolation norm taken in its z/(1+z) representation.

    Raises:
        InvertibilityError: if A is singular
    """
    if not operator.invertible:
        raise InvertibilityError("The Dore bound is stated for invertible operators")
    if not family or not len(xs):
        raise ParameterError("dore_ratio needs a nonempty family and sample")
    norm = _base_norm(norm)
    grid = grid or default_grid()
    psi = psi_resolvent()

    def interp(v: np.ndarray) -> float:
        return psi_rep_norm(space, operator, psi, v, include_base=False, norm=norm, grid=grid).value

    vectors = [np.asarray(x) for x in xs]
    base_norms = [interp(x) for x in vectors]
    report = DoreReport()
    for f in family:
        phi = _function_angle(operator, f)
        matrix = f.matrix_form(operator.matrix) if f.matrix_form is not None else calc_hinf(f, operator)
        sup = f.sup_bound(phi)
        best = 0.0
        for x, base in zip(vectors, base_norms):
            if base == 0:
                continue
            best = max(best, interp(matrix @ x) / (sup * base))
        report.ratios[f.name] = best
        report.sup_bounds[f.name] = sup
    return report
