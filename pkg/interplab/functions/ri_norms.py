"""
Norms of weighted rearrangement-invariant spaces, dilation norms and Boyd
indices.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from interplab.config import LabConfig
from interplab.functions.rearrangement import decreasing_rearrangement
from interplab.models.exceptions import EstimationError, ParameterError, RearrangementUndefinedError
from interplab.models.grid import LogGrid, SampledFunction
from interplab.models.spaces import Lorentz, Lp, NormEstimate, PhiSpace, RiSpace
from interplab.models.weight import UNIT_WEIGHT, ExplicitWeight, ProductWeight
from interplab.numerics.grids import cell_model

logger = logging.getLogger(__name__)

# exponent distance from a membership threshold below which fitted weights are inconclusive
_FIT_BAND = 0.05


@dataclass(frozen=True)
class FamilyMember:
    label: str
    function: SampledFunction


def phi_norm(space: PhiSpace, f: SampledFunction, extend: bool = False) -> NormEstimate:
    """
    Norm of f in the weighted space E_w.

    f is 0 outside the grid, so the value is the norm of its cell model on
    the grid. tail_bound is how far the power-law continuation of f past the
    grid moves that norm; it is inf when the continued f has a level set of
    infinite w-measure.

    Args:
        space: the weighted space
        f: scalar samples
        extend: report the norm of the continued model as the value instead

    Raises:
        ParameterError: for vector-valued f
        RearrangementUndefinedError: with extend, if the continued f has a
            level set of infinite w-measure
    """
    if f.is_vector:
        raise ParameterError("phi_norm expects a scalar function; reduce it with a pointwise norm first")
    model = cell_model(f)
    body = space.base.norm_of(decreasing_rearrangement(f, space.weight, model=model.body_only()))
    try:
        full = space.base.norm_of(decreasing_rearrangement(f, space.weight, model=model))
    except RearrangementUndefinedError as error:
        if extend:
            raise
        logger.debug("continued model has no rearrangement: %s", error)
        full = math.inf
    tail = abs(full - body) if math.isfinite(full) else math.inf
    value = full if extend else body
    if tail > LabConfig.TAIL_BOUND_TOLERANCE * value:
        logger.warning("tail contribution %.3g exceeds %.0f%% of the norm %.6g; refine or widen the grid",
                       tail, 100 * LabConfig.TAIL_BOUND_TOLERANCE, value)
    return NormEstimate(value, tail, quasi_norm=space.base.quasi_norm)


def vector_phi_norm(space: PhiSpace, f: SampledFunction, norm) -> NormEstimate:
    """phi_norm of t -> |f(t)| with the given row norm."""
    return phi_norm(space, f.pointwise_norm(norm))


def boyd_test_family(grid: LogGrid, space: Optional[RiSpace] = None) -> List[FamilyMember]:
    """
    Near-extremal functions for dilations: indicators of (0, a), powers
    t^-g on (0, 1) and powers t^-d on (1, inf), with g and d inside the
    ranges where the norms converge.
    """
    p = space.boyd_exponent if space is not None else 2.0
    nodes = grid.nodes
    members = []
    for a in (1e-2, 1.0, 1e2):
        if grid.t_min < a < grid.t_max:
            members.append(FamilyMember(f"indicator(0,{a:g})", SampledFunction(grid, (nodes < a).astype(float))))
    for frac in (0.25, 0.5, 0.75):
        g = frac / p
        values = np.where(nodes < 1.0, nodes ** (-g), 0.0)
        members.append(FamilyMember(f"power(0,1)^-{g:.4g}", SampledFunction(grid, values)))
    for extra in (0.25, 0.5, 1.0):
        d = 1.0 / p + extra
        values = np.where(nodes >= 1.0, nodes ** (-d), 0.0)
        members.append(FamilyMember(f"power(1,inf)^-{d:.4g}", SampledFunction(grid, values)))
    return members


def dilation_norm(space: RiSpace, t: float, family: Sequence[Union[FamilyMember, SampledFunction]]) -> float:
    """
    Lower bound for the norm of D_t f(s) = f(s / t) on the unweighted space E.

    For Lp the exact value t^(1/p) is returned.

    Raises:
        ParameterError: for an empty family or t <= 0
    """
    if not family:
        raise ParameterError("dilation_norm needs a nonempty test family")
    if not t > 0:
        raise ParameterError(f"Dilation parameter must be positive, got {t}")
    if isinstance(space, Lp):
        return space.dilation_factor(t)
    best = 0.0
    for member in family:
        f = member.function if isinstance(member, FamilyMember) else member
        rr = decreasing_rearrangement(f, UNIT_WEIGHT)
        base = space.norm_of(rr)
        if base == 0 or not math.isfinite(base):
            continue
        best = max(best, space.norm_of(rr.dilated(t)) / base)
    return best


@dataclass
class BoydEstimate:
    lower: float
    upper: float
    slope_at_infinity: float
    slope_at_zero: float
    samples: List[List[float]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_lower": self.lower,
            "q_upper": self.upper,
            "slope_at_infinity": self.slope_at_infinity,
            "slope_at_zero": self.slope_at_zero,
            "samples": self.samples,
        }


def boyd_indices(space: RiSpace, ts: Optional[Sequence[float]] = None,
                 family: Optional[Sequence[FamilyMember]] = None) -> BoydEstimate:
    """
    Estimate the Boyd indices from slope fits of log h_E(t) against log t.

    The slope over t in [1e2, t_max] estimates 1/p_E and the slope over
    t in [t_min, 1e-2] estimates 1/q_E.

    Raises:
        ParameterError: if ts does not reach 4 decades on both sides of 1
        EstimationError: if a fitted slope is not positive
    """
    ts = np.geomspace(1e-6, 1e6, 49) if ts is None else np.asarray(sorted(ts), dtype=float)
    if ts[0] > 1e-4 * (1 + 1e-12) or ts[-1] < 1e4 * (1 - 1e-12):
        raise ParameterError("Boyd index estimation needs t values spanning 4 decades on each side of 1")
    if family is None:
        family = boyd_test_family(LogGrid(1e-4, 1e4, 1601), space)
    h = np.array([dilation_norm(space, float(t), family) for t in ts])
    samples = [[float(t), float(v)] for t, v in zip(ts, h)]
    if np.any(h <= 0) or not np.all(np.isfinite(h)):
        raise EstimationError("Dilation norms must be positive and finite", {"samples": samples})

    large = ts >= 1e2
    small = ts <= 1e-2
    if large.sum() < 2 or small.sum() < 2:
        raise EstimationError("Too few dilation samples away from t = 1", {"samples": samples})
    slope_inf = float(np.polyfit(np.log(ts[large]), np.log(h[large]), 1)[0])
    slope_zero = float(np.polyfit(np.log(ts[small]), np.log(h[small]), 1)[0])
    if slope_inf <= 0 or slope_zero <= 0:
        raise EstimationError(
            "Degenerate slope fit for the dilation norms",
            {"slope_at_infinity": slope_inf, "slope_at_zero": slope_zero, "samples": samples},
        )
    logger.debug("boyd slopes %.6f (t->inf) %.6f (t->0)", slope_inf, slope_zero)
    return BoydEstimate(1.0 / slope_inf, 1.0 / slope_zero, slope_inf, slope_zero, samples)


@dataclass
class CutoffMembership:
    """Membership of chi_(0,1) and of min(1, 1/t); None means undecided."""

    indicator: Optional[bool]
    min_inverse: Optional[bool]
    method: str

    def to_dict(self) -> Dict[str, Any]:
        return {"indicator": self.indicator, "min_inverse": self.min_inverse, "method": self.method}


def _explicit_part(weight) -> Optional[ExplicitWeight]:
    resolved = weight.resolved if isinstance(weight, ProductWeight) else weight
    return resolved if isinstance(resolved, ExplicitWeight) else None


def cutoff_membership(space: PhiSpace) -> CutoffMembership:
    """
    Decide chi_(0,1) in E_w and min(1, 1/t) in E_w.

    For Lp and Lorentz bases the indicator belongs to E_w iff w is integrable
    near 0; min(1, 1/t) belongs iff in addition w(t) t^-p is integrable at
    infinity. Piecewise power weights are decided by their closed-form
    integrals, sampled weights by their fitted end exponents with an
    undecided band around the thresholds.
    """
    w = space.weight
    p = space.base.boyd_exponent
    head_mass = float(w.mass(0.0, 1.0))
    tail_mass = float(w.times_power(-p).mass(1.0, np.inf))
    indicator: Optional[bool] = bool(np.isfinite(head_mass))
    min_inverse: Optional[bool] = bool(indicator and np.isfinite(tail_mass))

    explicit = _explicit_part(w)
    if explicit is None:
        return CutoffMembership(indicator, min_inverse, "analytic")
    head_exp, tail_exp = w.end_exponents()
    if abs(head_exp + 1.0) < _FIT_BAND:
        indicator = None
        min_inverse = None
    elif abs(tail_exp - (p - 1.0)) < _FIT_BAND and indicator:
        min_inverse = None
    if indicator is None or min_inverse is None:
        logger.warning("membership of the cutoff functions is undecided for fitted exponents (%.4g, %.4g)",
                       head_exp, tail_exp)
    return CutoffMembership(indicator, min_inverse, "fitted-exponents")


def min_inverse_function(grid: LogGrid) -> SampledFunction:
    return SampledFunction.from_callable(grid, lambda t: np.minimum(1.0, 1.0 / t))
