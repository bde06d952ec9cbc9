"""
The Hardy operator P, its adjoint Q and the Calderon operator S = P + Q on
sampled functions, with operator-norm lower bounds on weighted spaces.

    Pf(t) = (1/t) int_0^t f(s) ds,    Qf(t) = int_t^inf f(s) ds/s
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from interplab.functions.ri_norms import FamilyMember, phi_norm
from interplab.models.exceptions import DomainError, InterpLabError, ParameterError
from interplab.models.grid import CellModel, LogGrid, SampledFunction
from interplab.models.spaces import Lorentz, Lp, PhiSpace
from interplab.models.weight import PowerChain
from interplab.numerics.grids import (
    cell_model,
    cumulative_integral,
    fit_edge,
    head_integral,
    tail_log_integral,
)

logger = logging.getLogger(__name__)

OPERATORS = ("P", "Q", "S")
FAMILY_EPSILONS = (0.02, 0.05, 0.08, 0.12, 0.2)


def apply_hardy(f: SampledFunction) -> SampledFunction:
    """
    Pf at the grid nodes; the integral over (0, t_min) comes from the head
    continuation of f.

    Raises:
        DomainError: if the head continuation is not integrable at 0
    """
    grid = f.grid
    head = head_integral(fit_edge(f, at_start=True), grid.edges[0])
    integral = cumulative_integral(f, head)
    nodes = grid.nodes[:, None] if f.is_vector else grid.nodes
    return SampledFunction(grid, integral / nodes)


def apply_adjoint(f: SampledFunction) -> SampledFunction:
    """
    Qf at the grid nodes with the analytic tail beyond t_max.

    Raises:
        DomainError: if the tail continuation does not decay
    """
    grid = f.grid
    h = grid.log_step
    tail = tail_log_integral(fit_edge(f, at_start=False), grid.edges[-1])
    cells = f.values * h
    inclusive = np.cumsum(cells[::-1], axis=0)[::-1]
    after = np.concatenate([inclusive[1:], np.zeros_like(inclusive[:1])], axis=0)
    return SampledFunction(grid, tail + after + 0.5 * cells)


def apply_calderon(f: SampledFunction) -> SampledFunction:
    return apply_hardy(f) + apply_adjoint(f)


_APPLY: Dict[str, Callable[[SampledFunction], SampledFunction]] = {
    "P": apply_hardy,
    "Q": apply_adjoint,
    "S": apply_calderon,
}


def _on_edges(model: CellModel, edges: np.ndarray) -> np.ndarray:
    """Values of a cell model on the cells of a finer edge sequence (0 outside the model)."""
    lefts = edges[:-1]
    idx = np.searchsorted(model.edges, lefts, side="right") - 1
    inside = (idx >= 0) & (idx < len(model.values))
    out = np.zeros(len(lefts))
    out[inside] = model.values[idx[inside]]
    return out


def duality_residual(f: SampledFunction, g: SampledFunction) -> float:
    """
    Relative gap between int f Qg and int g Pf.

    Both pairings are evaluated exactly for the continued step models of f
    and g, once summing over the cells of f first and once over those of g.

    Raises:
        DomainError: if f is not integrable at 0 or g does not decay at infinity
    """
    if f.is_vector or g.is_vector:
        raise ParameterError("duality_residual expects scalar functions")
    if f.grid != g.grid:
        raise ParameterError("duality_residual expects functions on the same grid")
    f_head = fit_edge(f, at_start=True)
    if not f_head.is_zero and f_head.exponent <= -1.0:
        raise DomainError("int g Pf diverges: f is not integrable near 0")
    g_tail = fit_edge(g, at_start=False)
    if not g_tail.is_zero and g_tail.exponent >= 0.0:
        raise DomainError("int f Qg diverges: g does not decay at infinity")

    mf = cell_model(f)
    mg = cell_model(g)
    edges = np.union1d(mf.edges, mg.edges)
    fv = _on_edges(mf, edges)
    gv = _on_edges(mg, edges)
    a, b = edges[:-1], edges[1:]
    lengths = b - a
    with np.errstate(divide="ignore"):
        log_ratio = np.where(a > 0, np.log(b / np.where(a > 0, a, 1.0)), 0.0)
    diagonal = np.sum(fv * gv * (lengths - a * log_ratio))

    f_mass = fv * lengths
    f_before = np.concatenate(([0.0], np.cumsum(f_mass)[:-1]))
    g_log = gv * log_ratio
    g_after = np.concatenate((np.cumsum(g_log[::-1])[::-1][1:], [0.0]))

    f_q_g = float(np.sum(f_mass * g_after) + diagonal)
    g_p_f = float(np.sum(g_log * f_before) + diagonal)
    scale = max(abs(f_q_g), np.finfo(float).tiny)
    return abs(f_q_g - g_p_f) / scale


@dataclass
class OperatorNormReport:
    """Certified lower bound for an operator norm, with the per-member ratios."""

    operator: str
    lower_bound: float
    best_member: Optional[str]
    ratios: Dict[str, float] = field(default_factory=dict)
    skipped: Dict[str, str] = field(default_factory=dict)
    max_relative_tail: float = 0.0
    analytic_upper: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "operator": self.operator,
            "lower_bound": self.lower_bound,
            "best_member": self.best_member,
            "ratios": dict(self.ratios),
            "skipped": dict(self.skipped),
            "max_relative_tail": self.max_relative_tail,
            "analytic_upper": self.analytic_upper,
        }


def analytic_norm(operator: str, space: PhiSpace) -> Optional[float]:
    """
    Known operator norms on L^p(t^alpha dt):
    |P| = p/(p-1-alpha) for alpha < p-1 and |Q| = p/(alpha+1) for alpha > -1;
    for S the sum is returned as an upper bound.
    """
    params = space.power_weighted_lp()
    if params is None:
        return None
    p, alpha = params
    p_norm = p / (p - 1.0 - alpha) if alpha < p - 1.0 else math.inf
    q_norm = p / (alpha + 1.0) if alpha > -1.0 else math.inf
    return {"P": p_norm, "Q": q_norm, "S": p_norm + q_norm}[operator]


def opnorm_lower(operator: str, space: PhiSpace, family: Sequence[FamilyMember]) -> OperatorNormReport:
    """
    max |op f|_Phi / |f|_Phi over the family.

    Both norms are taken on the continued models, matching the head
    continuation that Pf integrates.

    Members with zero or infinite norm, or for which op f is not defined,
    are skipped and reported.
    """
    if operator not in _APPLY:
        raise ParameterError(f"Unknown operator {operator!r}; expected one of {', '.join(OPERATORS)}")
    apply = _APPLY[operator]
    report = OperatorNormReport(operator, 0.0, None, analytic_upper=analytic_norm(operator, space))
    for member in family:
        try:
            base = phi_norm(space, member.function, extend=True)
            if base.value == 0 or not math.isfinite(base.value):
                report.skipped[member.label] = "zero or infinite norm"
                continue
            image = phi_norm(space, apply(member.function), extend=True)
        except InterpLabError as error:
            report.skipped[member.label] = f"{type(error).__name__}: {error}"
            continue
        if not math.isfinite(image.value):
            report.skipped[member.label] = "image has infinite norm"
            continue
        ratio = image.value / base.value
        report.ratios[member.label] = ratio
        report.max_relative_tail = max(report.max_relative_tail, base.relative_tail, image.relative_tail)
        if ratio > report.lower_bound:
            report.lower_bound = ratio
            report.best_member = member.label
    for label, reason in report.skipped.items():
        logger.warning("skipped family member %s: %s", label, reason)
    return report


def hardy_test_family(grid: LogGrid, space: PhiSpace,
                      epsilons: Sequence[float] = FAMILY_EPSILONS) -> List[FamilyMember]:
    """
    Near-extremal functions for P and Q on E_w.

    With theta = 1 - (alpha + 1)/p for the weight exponent alpha at each end,
    the family holds indicators, one-sided powers t^(theta-1+eps) on (0, 1)
    and t^(theta-1-eps) on (1, inf), and the two-sided t^(theta-1) min(t, 1/t)^eps.
    """
    p = space.base.boyd_exponent
    alpha_zero, alpha_inf = space.weight.end_exponents()
    theta_zero = 1.0 - (alpha_zero + 1.0) / p
    theta_inf = 1.0 - (alpha_inf + 1.0) / p
    nodes = grid.nodes
    below = nodes < 1.0
    members = []
    for a in (1e-2, 1.0, 1e2):
        if grid.t_min < a < grid.t_max:
            members.append(FamilyMember(f"indicator(0,{a:g})", SampledFunction(grid, (nodes < a).astype(float))))
    for eps in epsilons:
        left = nodes ** (theta_zero - 1.0 + eps)
        right = nodes ** (theta_inf - 1.0 - eps)
        members.append(FamilyMember(f"left-power eps={eps:g}", SampledFunction(grid, np.where(below, left, 0.0))))
        members.append(FamilyMember(f"right-power eps={eps:g}", SampledFunction(grid, np.where(below, 0.0, right))))
        members.append(FamilyMember(f"two-sided eps={eps:g}", SampledFunction(grid, np.where(below, left, right))))
    return members


@dataclass
class CalderonClassification:
    hardy: Optional[bool]
    adjoint: Optional[bool]
    calderon: Optional[bool]
    source: str

    def to_dict(self) -> Dict[str, Any]:
        return {"P": self.hardy, "Q": self.adjoint, "S": self.calderon, "source": self.source}


def calderon_classification(space: PhiSpace) -> CalderonClassification:
    """
    Which of P, Q, P + Q are bounded on the space.

    Unweighted Lp and Lorentz spaces are decided by their Boyd indices
    (P bounded iff p_E > 1, S bounded iff 1 < p_E <= q_E < inf); weighted Lp
    by the M_p, M^p and C_p verdicts of the weight.
    """
    from interplab.functions.weight_classes import m1_constant, mp_constant, mup_constant
    from interplab.models.report import Verdict

    weight = space.weight
    p = space.base.boyd_exponent
    unweighted = isinstance(weight, PowerChain) and not len(weight.breakpoints) \
        and weight.exponents[0] == 0.0 and weight.scale == 1.0
    if unweighted:
        hardy = p > 1.0
        return CalderonClassification(hardy, True, hardy, "boyd-indices")
    if isinstance(space.base, Lorentz):
        return CalderonClassification(None, None, None, "unknown for weighted Lorentz spaces")

    def decided(verdict: Verdict) -> Optional[bool]:
        return None if verdict is Verdict.INCONCLUSIVE else verdict is Verdict.IN

    if p == 1.0:
        hardy = decided(m1_constant(weight).verdict)
        adjoint = decided(mup_constant(weight, 1.0).verdict)
        source = "M_1 / M^1"
    else:
        hardy = decided(mp_constant(weight, p).verdict)
        adjoint = decided(mup_constant(weight, p).verdict)
        source = "M_p / M^p"
    if hardy is None or adjoint is None:
        calderon = False if (hardy is False or adjoint is False) else None
    else:
        calderon = hardy and adjoint
    return CalderonClassification(hardy, adjoint, calderon, source)
