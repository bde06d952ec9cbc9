"""
Weights on (0, inf): strictly positive, locally integrable functions.

Power and PiecewisePower weights are piecewise power laws with closed-form
integrals. Products, powers, dilations and multiplication by t^a of such
weights stay piecewise power laws (PowerChain). Explicit weights are sampled
and continued past their grid by fitted power laws.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from interplab.models.exceptions import ParameterError
from interplab.models.grid import LogGrid, SampledFunction

# exponents closer than this to -1 integrate as logarithms
_LOG_BRANCH = 1e-14


def power_integral(coeff, alpha: float, lo, hi) -> np.ndarray:
    """
    Integral of coeff * t^alpha over (lo, hi), elementwise.

    lo may be 0 and hi may be inf; divergent integrals give inf, empty
    intervals give 0.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    coeff = np.asarray(coeff, dtype=float)
    lo, hi, coeff = np.broadcast_arrays(lo, hi, coeff)
    out = np.zeros(lo.shape)
    active = hi > lo
    if not np.any(active):
        return out
    beta = alpha + 1.0
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        at_zero = active & (lo == 0)
        at_inf = active & np.isinf(hi)
        regular = active & ~at_zero & ~at_inf
        if abs(beta) < _LOG_BRANCH:
            out[regular] = np.log(hi[regular] / lo[regular])
            out[at_zero | at_inf] = np.inf
        else:
            ratio_log = np.log(hi[regular] / lo[regular])
            out[regular] = lo[regular] ** beta * np.expm1(beta * ratio_log) / beta
            if beta > 0:
                both = at_zero & at_inf
                out[at_zero & ~at_inf] = hi[at_zero & ~at_inf] ** beta / beta
                out[at_inf] = np.inf
                out[both] = np.inf
            else:
                out[at_zero] = np.inf
                only_inf = at_inf & ~at_zero
                out[only_inf] = -lo[only_inf] ** beta / beta
    return coeff * out


class Weight(ABC):
    """A weight w on (0, inf)."""

    @abstractmethod
    def __call__(self, t) -> np.ndarray:
        pass

    @abstractmethod
    def mass(self, a, b) -> np.ndarray:
        """Integral of w over (a, b), elementwise; a may be 0, b may be inf."""
        pass

    @abstractmethod
    def power(self, s: float) -> "Weight":
        """The weight w^s."""
        pass

    @abstractmethod
    def times_power(self, alpha: float) -> "Weight":
        """The weight t^alpha * w(t)."""
        pass

    @abstractmethod
    def dilate(self, lam: float) -> "Weight":
        """The weight t -> w(lam * t)."""
        pass

    @abstractmethod
    def times(self, other: "Weight") -> "Weight":
        pass

    @abstractmethod
    def end_exponents(self) -> Tuple[float, float]:
        """Power-law exponents of w near 0 and near infinity."""
        pass

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        pass

    @property
    def is_analytic(self) -> bool:
        return False

    def mass_near_zero(self) -> float:
        return float(self.mass(0.0, 1.0))

    def is_decreasing(self) -> bool:
        return False

    def is_increasing(self) -> bool:
        return False


class PowerChain(Weight):
    """
    Continuous piecewise power law.

    w(t) = c_j t^{alpha_j} on [b_j, b_{j+1}) with b_0 = 0, b_{k+1} = inf and
    c_0 = scale; the other c_j follow from continuity at the breakpoints.
    """

    def __init__(self, exponents: Sequence[float], breakpoints: Sequence[float] = (), scale: float = 1.0):
        exps = np.asarray(exponents, dtype=float).ravel()
        bps = np.asarray(breakpoints, dtype=float).ravel()
        if len(exps) != len(bps) + 1:
            raise ParameterError("A power chain needs one more exponent than breakpoints")
        if not np.all(np.isfinite(exps)):
            raise ParameterError("Weight exponents must be finite")
        if np.any(bps <= 0) or np.any(~np.isfinite(bps)) or np.any(np.diff(bps) <= 0):
            raise ParameterError("Breakpoints must be positive, finite and strictly increasing")
        if not (scale > 0 and math.isfinite(scale)):
            raise ParameterError(f"Weight scale must be positive, got {scale}")
        self.exponents = exps
        self.breakpoints = bps
        self.scale = float(scale)
        coeffs = [self.scale]
        for j, b in enumerate(bps):
            coeffs.append(coeffs[-1] * b ** (exps[j] - exps[j + 1]))
        self._coeffs = np.array(coeffs)

    @property
    def is_analytic(self) -> bool:
        return True

    def _segment_bounds(self) -> List[Tuple[float, float]]:
        edges = np.concatenate(([0.0], self.breakpoints, [np.inf]))
        return list(zip(edges[:-1], edges[1:]))

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        seg = np.searchsorted(self.breakpoints, t, side="right")
        return self._coeffs[seg] * t ** self.exponents[seg]

    def mass(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        a, b = np.broadcast_arrays(a, b)
        total = np.zeros(a.shape)
        for j, (lo, hi) in enumerate(self._segment_bounds()):
            seg_lo = np.maximum(a, lo)
            seg_hi = np.minimum(b, hi)
            total = total + power_integral(self._coeffs[j], self.exponents[j], seg_lo, seg_hi)
        return total

    def power(self, s: float) -> "PowerChain":
        return PowerChain(self.exponents * s, self.breakpoints, self.scale ** s)

    def times_power(self, alpha: float) -> "PowerChain":
        return PowerChain(self.exponents + alpha, self.breakpoints, self.scale)

    def dilate(self, lam: float) -> "PowerChain":
        if not lam > 0:
            raise ParameterError(f"Dilation factor must be positive, got {lam}")
        return PowerChain(self.exponents, self.breakpoints / lam, self.scale * lam ** self.exponents[0])

    def times(self, other: Weight) -> Weight:
        if isinstance(other, PowerChain):
            merged = np.union1d(self.breakpoints, other.breakpoints)
            probes = _segment_probes(merged)
            exps = [self._exponent_at(p) + other._exponent_at(p) for p in probes]
            return PowerChain(exps, merged, self.scale * other.scale)
        return other.times(self)

    def _exponent_at(self, t: float) -> float:
        return float(self.exponents[np.searchsorted(self.breakpoints, t, side="right")])

    def end_exponents(self) -> Tuple[float, float]:
        return float(self.exponents[0]), float(self.exponents[-1])

    def is_decreasing(self) -> bool:
        return bool(np.all(self.exponents <= 0))

    def is_increasing(self) -> bool:
        return bool(np.all(self.exponents >= 0))

    def describe(self) -> Dict[str, Any]:
        return {
            "type": "chain",
            "exponents": [float(e) for e in self.exponents],
            "breakpoints": [float(b) for b in self.breakpoints],
            "scale": self.scale,
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerChain):
            return NotImplemented
        return (np.array_equal(self.exponents, other.exponents)
                and np.array_equal(self.breakpoints, other.breakpoints)
                and self.scale == other.scale)

    def __hash__(self) -> int:
        return hash((tuple(self.exponents), tuple(self.breakpoints), self.scale))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()})"


def _segment_probes(breakpoints: np.ndarray) -> List[float]:
    """One point strictly inside each segment cut by the breakpoints."""
    if len(breakpoints) == 0:
        return [1.0]
    probes = [breakpoints[0] / 2.0]
    probes += [math.sqrt(lo * hi) for lo, hi in zip(breakpoints[:-1], breakpoints[1:])]
    probes.append(breakpoints[-1] * 2.0)
    return probes


class Power(PowerChain):
    """w(t) = scale * t^alpha."""

    def __init__(self, alpha: float, scale: float = 1.0):
        super().__init__((alpha,), (), scale)
        self.alpha = float(alpha)

    def describe(self) -> Dict[str, Any]:
        info: Dict[str, Any] = {"type": "pow", "alpha": self.alpha}
        if self.scale != 1.0:
            info["scale"] = self.scale
        return info


class PiecewisePower(PowerChain):
    """w(t) = scale * (t/b)^alpha for t < b and scale * (t/b)^beta for t >= b."""

    def __init__(self, alpha: float, beta: float, breakpoint: float = 1.0, scale: float = 1.0):
        if not breakpoint > 0:
            raise ParameterError(f"Breakpoint must be positive, got {breakpoint}")
        super().__init__((alpha, beta), (breakpoint,), scale * breakpoint ** (-alpha))
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.breakpoint = float(breakpoint)
        self.level = float(scale)

    def describe(self) -> Dict[str, Any]:
        info: Dict[str, Any] = {"type": "pp", "alpha": self.alpha, "beta": self.beta}
        if self.breakpoint != 1.0:
            info["breakpoint"] = self.breakpoint
        if self.level != 1.0:
            info["scale"] = self.level
        return info


class ExplicitWeight(Weight):
    """
    A sampled positive weight.

    Inside the grid the weight is the step function of its samples; outside
    it follows the power laws fitted on the first and last decade.
    """

    def __init__(self, samples: SampledFunction, source: str = ""):
        from interplab.numerics.grids import fit_edge

        if samples.is_vector or samples.is_complex:
            raise ParameterError("An explicit weight must be scalar and real")
        if np.any(samples.values <= 0):
            raise ParameterError("An explicit weight must be strictly positive")
        self.samples = samples
        self.source = source
        self.head_fit = fit_edge(samples, at_start=True)
        self.tail_fit = fit_edge(samples, at_start=False)
        self._edges = samples.grid.edges
        cells = samples.values * samples.grid.cell_lengths
        self._cumulative = np.concatenate(([0.0], np.cumsum(cells)))

    @property
    def grid(self) -> LogGrid:
        return self.samples.grid

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        edges = self._edges
        idx = np.clip(np.searchsorted(edges, t, side="right") - 1, 0, self.grid.n - 1)
        out = np.asarray(self.samples.values[idx], dtype=float)
        below = t < edges[0]
        above = t >= edges[-1]
        out = np.where(below, self.head_fit(np.where(below, t, 1.0)), out)
        out = np.where(above, self.tail_fit(np.where(above, t, 1.0)), out)
        return out

    def _body_antiderivative(self, x: np.ndarray) -> np.ndarray:
        edges = self._edges
        xc = np.clip(x, edges[0], edges[-1])
        idx = np.clip(np.searchsorted(edges, xc, side="right") - 1, 0, self.grid.n - 1)
        return self._cumulative[idx] + self.samples.values[idx] * (xc - edges[idx])

    def mass(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        a, b = np.broadcast_arrays(a, b)
        lo_edge, hi_edge = self._edges[0], self._edges[-1]
        body = np.where(b > a, self._body_antiderivative(b) - self._body_antiderivative(a), 0.0)
        head_coeff = float(self.head_fit.level) * self.head_fit.anchor ** (-self.head_fit.exponent)
        head = power_integral(head_coeff, self.head_fit.exponent, a, np.minimum(b, lo_edge))
        tail_coeff = float(self.tail_fit.level) * self.tail_fit.anchor ** (-self.tail_fit.exponent)
        tail = power_integral(tail_coeff, self.tail_fit.exponent, np.maximum(a, hi_edge), b)
        return body + head + tail

    def power(self, s: float) -> "ExplicitWeight":
        return ExplicitWeight(self.samples.with_values(self.samples.values ** s), self.source)

    def times_power(self, alpha: float) -> "ExplicitWeight":
        values = self.samples.values * self.grid.nodes ** alpha
        return ExplicitWeight(self.samples.with_values(values), self.source)

    def dilate(self, lam: float) -> "ExplicitWeight":
        if not lam > 0:
            raise ParameterError(f"Dilation factor must be positive, got {lam}")
        grid = LogGrid(self.grid.t_min / lam, self.grid.t_max / lam, self.grid.n)
        return ExplicitWeight(SampledFunction(grid, self.samples.values), self.source)

    def times(self, other: Weight) -> "ExplicitWeight":
        if isinstance(other, ExplicitWeight):
            if other.grid != self.grid:
                raise ParameterError("Explicit weights on different grids cannot be multiplied")
            values = self.samples.values * other.samples.values
        else:
            values = self.samples.values * other(self.grid.nodes)
        return ExplicitWeight(self.samples.with_values(values), self.source)

    def end_exponents(self) -> Tuple[float, float]:
        return self.head_fit.exponent, self.tail_fit.exponent

    def is_decreasing(self) -> bool:
        v = self.samples.values
        return bool(np.all(np.diff(v) <= 0) and self.head_fit.exponent <= 0 and self.tail_fit.exponent <= 0)

    def is_increasing(self) -> bool:
        v = self.samples.values
        return bool(np.all(np.diff(v) >= 0) and self.head_fit.exponent >= 0 and self.tail_fit.exponent >= 0)

    def describe(self) -> Dict[str, Any]:
        return {
            "type": "file",
            "source": self.source,
            "grid": [self.grid.t_min, self.grid.t_max, self.grid.n],
            "fit_exponents": {"near_zero": self.head_fit.exponent, "near_infinity": self.tail_fit.exponent},
        }

    def __repr__(self) -> str:
        return f"ExplicitWeight({self.describe()})"


class ProductWeight(Weight):
    """Pointwise product of weights; evaluated through the folded product."""

    def __init__(self, factors: Iterable[Weight]):
        self.factors = list(factors)
        if not self.factors:
            raise ParameterError("A product weight needs at least one factor")
        explicit = [f for f in self.factors if not f.is_analytic]
        ordered = explicit + [f for f in self.factors if f.is_analytic]
        resolved = ordered[0]
        for factor in ordered[1:]:
            resolved = resolved.times(factor)
        self.resolved = resolved

    @property
    def is_analytic(self) -> bool:
        return self.resolved.is_analytic

    def __call__(self, t) -> np.ndarray:
        return self.resolved(t)

    def mass(self, a, b) -> np.ndarray:
        return self.resolved.mass(a, b)

    def power(self, s: float) -> Weight:
        return self.resolved.power(s)

    def times_power(self, alpha: float) -> Weight:
        return self.resolved.times_power(alpha)

    def dilate(self, lam: float) -> Weight:
        return self.resolved.dilate(lam)

    def times(self, other: Weight) -> Weight:
        return self.resolved.times(other)

    def end_exponents(self) -> Tuple[float, float]:
        return self.resolved.end_exponents()

    def is_decreasing(self) -> bool:
        return self.resolved.is_decreasing()

    def is_increasing(self) -> bool:
        return self.resolved.is_increasing()

    def describe(self) -> Dict[str, Any]:
        return {"type": "product", "factors": [f.describe() for f in self.factors]}

    def __repr__(self) -> str:
        return f"ProductWeight({self.describe()})"


UNIT_WEIGHT = Power(0.0)
