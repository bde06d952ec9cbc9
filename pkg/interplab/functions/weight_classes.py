"""
Constants of the weight classes M_p, M_1, M^p, M^1, A_p^-, A_p^+ and the
classification of a weight against them.

All defining integrals go through Weight.mass, which is closed-form for
piecewise power weights and cellwise with fitted continuations for sampled
ones. A constant whose defining integral is infinite is diverging at once;
otherwise it is swept over growing ranges and judged by its growth.
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from interplab.config import LabConfig
from interplab.functions.hardy import hardy_test_family, opnorm_lower
from interplab.models.exceptions import ParameterError
from interplab.models.grid import LogGrid
from interplab.models.report import ConstantEstimate, Verdict, WeightClassReport
from interplab.models.spaces import Lp, PhiSpace, RiSpace
from interplab.models.weight import Weight

logger = logging.getLogger(__name__)

# positions of b inside (a, c) before refinement
_RELATIVE_POSITIONS = np.arange(1, 8) / 8.0
# a as a fraction of c
_LEFT_FRACTIONS = (0.0, 0.1, 0.5)
# increments still above this share of the value at the end of a sweep leave it undecided
_SETTLED = 1e-3


def _conjugate(p: float) -> float:
    return p / (p - 1.0)


def _check_p(p: float, allow_one: bool = False) -> None:
    if not (p > 1.0 or (allow_one and p == 1.0)) or not math.isfinite(p):
        raise ParameterError(f"Exponent must be {'>= 1' if allow_one else '> 1'} and finite, got {p}")


def _decade_grid(decades: float, per_decade: int) -> np.ndarray:
    half = decades / 2.0
    return np.logspace(-half, half, int(round(decades * per_decade)) + 1)


def _judge_sweep(name: str, rs: np.ndarray, values: np.ndarray) -> ConstantEstimate:
    """
    Verdict for a constant sampled at scales rs.

    The running supremum over |log10 r| <= d is followed for d = 1, 2, ...;
    growth by the divergence factor per decade over the last decades, or
    increments that stop decaying, mean divergence.
    """
    if not np.all(np.isfinite(values)):
        return ConstantEstimate(name, math.inf, Verdict.OUT, "non-finite product inside the sweep")
    depth = np.abs(np.log10(rs))
    widths = np.arange(1, int(math.floor(depth.max() + 1e-9)) + 1, dtype=float)
    if len(widths) == 0:
        widths = np.array([depth.max()])
    sups = np.array([values[depth <= d + 1e-9].max() for d in widths])
    curve = [(float(d), float(s)) for d, s in zip(widths, sups)]
    value = float(sups[-1])
    span = LabConfig.DIVERGENCE_DECADES
    if len(sups) > span:
        recent = sups[-(span + 1):]
        growth = recent[1:] / np.maximum(recent[:-1], np.finfo(float).tiny)
        if np.all(growth >= LabConfig.DIVERGENCE_FACTOR):
            return ConstantEstimate(name, math.inf, Verdict.OUT,
                                    f"grows by >= {LabConfig.DIVERGENCE_FACTOR:g}x per decade", curve)
        increments = np.diff(recent)
        if np.all(increments > _SETTLED * value) and np.all(increments[1:] >= increments[:-1] * (1 - 1e-9)):
            return ConstantEstimate(name, math.inf, Verdict.OUT, "increments per decade do not decay", curve)
        if increments[-1] > _SETTLED * value * 10:
            return ConstantEstimate(name, value, Verdict.INCONCLUSIVE, "still growing at the end of the sweep", curve)
    return ConstantEstimate(name, value, Verdict.IN, "", curve)


def mp_constant(w: Weight, p: float, decades: Optional[float] = None,
                per_decade: Optional[int] = None) -> ConstantEstimate:
    """
    [w]_{M_p} = sup_r (int_r^inf w(s) s^-p ds) (int_0^r w^(1-p'))^(p-1).

    Raises:
        ParameterError: if p <= 1
    """
    _check_p(p)
    name = f"M_{p:g}"
    tail_weight = w.times_power(-p)
    dual_weight = w.power(1.0 - _conjugate(p))
    if not np.isfinite(tail_weight.mass(1.0, np.inf)):
        return ConstantEstimate(name, math.inf, Verdict.OUT, "int_r^inf w(s) s^-p ds diverges")
    if not np.isfinite(dual_weight.mass(0.0, 1.0)):
        return ConstantEstimate(name, math.inf, Verdict.OUT, "w^(1-p') is not integrable near 0")
    rs = _decade_grid(decades or LabConfig.SWEEP_DECADES, per_decade or LabConfig.SWEEP_SAMPLES_PER_DECADE)
    values = tail_weight.mass(rs, np.inf) * dual_weight.mass(0.0, rs) ** (p - 1.0)
    logger.debug("%s sweep over %d scales", name, len(rs))
    return _judge_sweep(name, rs, values)


def m1_constant(w: Weight, decades: Optional[float] = None,
                per_decade: Optional[int] = None) -> ConstantEstimate:
    """[w]_{M_1} = sup_t Qw(t)/w(t) with Qw(t) = int_t^inf w(s) ds/s."""
    name = "M_1"
    log_weight = w.times_power(-1.0)
    if not np.isfinite(log_weight.mass(1.0, np.inf)):
        return ConstantEstimate(name, math.inf, Verdict.OUT, "Qw diverges")
    ts = _decade_grid(decades or LabConfig.SWEEP_DECADES, per_decade or LabConfig.SWEEP_SAMPLES_PER_DECADE)
    return _judge_sweep(name, ts, log_weight.mass(ts, np.inf) / w(ts))


def m_upper_one_constant(w: Weight, decades: Optional[float] = None,
                         per_decade: Optional[int] = None) -> ConstantEstimate:
    """[w]_{M^1} = sup_t Pw(t)/w(t) with Pw(t) = (1/t) int_0^t w."""
    name = "M^1"
    if not np.isfinite(w.mass(0.0, 1.0)):
        return ConstantEstimate(name, math.inf, Verdict.OUT, "w is not integrable near 0")
    ts = _decade_grid(decades or LabConfig.SWEEP_DECADES, per_decade or LabConfig.SWEEP_SAMPLES_PER_DECADE)
    return _judge_sweep(name, ts, w.mass(0.0, ts) / (ts * w(ts)))


def mup_constant(w: Weight, p: float, decades: Optional[float] = None,
                 per_decade: Optional[int] = None) -> ConstantEstimate:
    """[w]_{M^p} = [w^(1/(1-p))]_{M_p'}; p = 1 gives [w]_{M^1}."""
    _check_p(p, allow_one=True)
    if p == 1.0:
        return m_upper_one_constant(w, decades, per_decade)
    estimate = mp_constant(w.power(1.0 / (1.0 - p)), _conjugate(p), decades, per_decade)
    estimate.name = f"M^{p:g}"
    return estimate


def _apminus_product(w: Weight, dual: Weight, p: float, a, b, c) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        return (c - a) ** (-p) * w.mass(b, c) * dual.mass(a, b) ** (p - 1.0)


def apminus_constant(w: Weight, p: float, decades: Optional[float] = None,
                     per_decade: Optional[int] = None, refine: bool = True) -> ConstantEstimate:
    """
    [w]_{A_p^-} = sup_{0 <= a < b < c} (c-a)^-p (int_b^c w) (int_a^b w^(1-p'))^(p-1).

    Triples: c on a log grid, a in {0, c/10, c/2}, b at relative positions
    in (a, c); the best position for each (a, c) is refined by a bounded
    scalar search.
    """
    _check_p(p)
    name = f"A_{p:g}^-"
    dual = w.power(1.0 - _conjugate(p))
    if not np.isfinite(dual.mass(0.0, 1.0)):
        return ConstantEstimate(name, math.inf, Verdict.OUT, "w^(1-p') is not integrable near 0 (a = 0 triples)")
    cs = _decade_grid(decades or LabConfig.SWEEP_DECADES, per_decade or LabConfig.SWEEP_SAMPLES_PER_DECADE)
    best = np.zeros(len(cs))
    for frac in _LEFT_FRACTIONS:
        a = frac * cs
        span = cs - a
        bs = a[:, None] + _RELATIVE_POSITIONS[None, :] * span[:, None]
        grid_values = _apminus_product(w, dual, p, a[:, None], bs, cs[:, None])
        top = np.argmax(grid_values, axis=1)
        level = grid_values[np.arange(len(cs)), top]
        if refine:
            level = np.array([
                _refine_position(w, dual, p, a[i], cs[i], _RELATIVE_POSITIONS[top[i]], level[i])
                for i in range(len(cs))
            ])
        best = np.maximum(best, level)
    return _judge_sweep(name, cs, best)


def _refine_position(w: Weight, dual: Weight, p: float, a: float, c: float, u0: float, start: float) -> float:
    step = 1.0 / 8.0
    lo, hi = max(u0 - step, 1e-9), min(u0 + step, 1.0 - 1e-9)

    def negative(u: float) -> float:
        b = a + u * (c - a)
        return -float(_apminus_product(w, dual, p, a, b, c))

    result = optimize.minimize_scalar(negative, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    return max(start, -float(result.fun)) if np.isfinite(result.fun) else start


def applus_constant(w: Weight, p: float, decades: Optional[float] = None,
                    per_decade: Optional[int] = None, refine: bool = True) -> ConstantEstimate:
    """[w]_{A_p^+} = [w^(1/(1-p))]_{A_p'^-}."""
    _check_p(p)
    estimate = apminus_constant(w.power(1.0 / (1.0 - p)), _conjugate(p), decades, per_decade, refine)
    estimate.name = f"A_{p:g}^+"
    return estimate


def _combine(*verdicts: Verdict) -> Verdict:
    if any(v is Verdict.OUT for v in verdicts):
        return Verdict.OUT
    if all(v is Verdict.IN for v in verdicts):
        return Verdict.IN
    return Verdict.INCONCLUSIVE


def classify(w: Weight, p: float, decades: Optional[float] = None) -> WeightClassReport:
    """
    Constants and verdicts for M_p, M^p, A_p^-, A_p^+ and C_p = M_p with M^p.

    The report also checks the inclusion A_p^- in M_p and probes the
    openness of A_p^- by the constant at an exponent slightly below p.
    """
    _check_p(p)
    report = WeightClassReport(weight=w.describe(), p=p)
    for key, estimate in (
        ("M_p", mp_constant(w, p, decades)),
        ("M^p", mup_constant(w, p, decades)),
        ("A_p^-", apminus_constant(w, p, decades)),
        ("A_p^+", applus_constant(w, p, decades)),
    ):
        report.constants[key] = estimate
        report.verdicts[key] = estimate.verdict
    report.verdicts["C_p"] = _combine(report.verdicts["M_p"], report.verdicts["M^p"])

    a_minus, m_p = report.verdicts["A_p^-"], report.verdicts["M_p"]
    report.checks["A_p^- subset M_p"] = {
        "consistent": not (a_minus is Verdict.IN and m_p is Verdict.OUT),
        "A_p^-": a_minus.value,
        "M_p": m_p.value,
    }
    q = p - 0.05 * (p - 1.0)
    lower = apminus_constant(w, q, decades)
    report.checks["openness"] = {
        "q": q,
        "A_q^-": lower.verdict.value,
        "constant": lower.value,
        "consistent": not (a_minus is Verdict.IN and lower.verdict is Verdict.OUT),
    }
    logger.info("classified %s at p=%g: %s", w.describe(), p,
                {k: v.value for k, v in report.verdicts.items()})
    return report


def probe_space_inclusion(w: Weight, space: RiSpace, grid: Optional[LogGrid] = None,
                          extensions: Sequence[Sequence[float]] = ((0.2, 0.12), (0.2, 0.12, 0.08, 0.05),
                                                                   (0.2, 0.12, 0.08, 0.05, 0.02))) -> dict:
    """
    Exploratory record for the open inclusion M_{p_E} in M_E: the M_{p_E}
    verdict of w next to the lower bounds for |P| on E_w over growing test
    families. Saturating bounds are the numerical face of boundedness.
    """
    p_e = space.boyd_exponent
    grid = grid or LogGrid(1e-9, 1e9, 18 * 60 + 1)
    phi = PhiSpace(space, w)
    bounds: List[Tuple[int, float]] = []
    for eps in extensions:
        family = hardy_test_family(grid, phi, eps)
        bounds.append((len(family), opnorm_lower("P", phi, family).lower_bound))
    saturated = len(bounds) > 1 and bounds[-1][1] <= bounds[-2][1] * 1.05
    m_verdict = mp_constant(w, p_e).verdict if p_e > 1 else m1_constant(w).verdict
    return {
        "exploratory": True,
        "space": space.describe(),
        "weight": w.describe(),
        "boyd_exponent": p_e,
        "M_pE": m_verdict.value,
        "hardy_lower_bounds": [[n, b] for n, b in bounds],
        "saturated": saturated,
    }
