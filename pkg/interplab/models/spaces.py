"""
Rearrangement-invariant base spaces, weighted spaces E_w and the
decreasing rearrangement they are evaluated on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from interplab.models.exceptions import ParameterError
from interplab.models.weight import UNIT_WEIGHT, PowerChain, Weight


@dataclass(frozen=True)
class RearrangementResult:
    """
    Nonincreasing right-continuous step function on the measure axis.

    f*(s) = levels[k] for breakpoints[k] <= s < breakpoints[k + 1] and 0 past
    the last breakpoint.
    """

    breakpoints: np.ndarray
    levels: np.ndarray

    def __post_init__(self):
        bps = np.asarray(self.breakpoints, dtype=float)
        lvl = np.asarray(self.levels, dtype=float)
        if len(bps) != len(lvl) + 1 or (len(bps) and bps[0] != 0.0):
            raise ParameterError("Rearrangement breakpoints must start at 0 and outnumber levels by one")
        if np.any(np.diff(bps) <= 0) or np.any(np.diff(lvl) >= 0) or np.any(lvl <= 0):
            raise ParameterError("Rearrangement levels must be positive and strictly decreasing")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "levels", lvl)

    @classmethod
    def empty(cls) -> "RearrangementResult":
        return cls(np.zeros(1), np.zeros(0))

    @property
    def total_measure(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def is_zero(self) -> bool:
        return len(self.levels) == 0

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.breakpoints, s, side="right") - 1
        padded = np.concatenate((self.levels, [0.0]))
        return padded[np.clip(idx, 0, len(self.levels))]

    def measure_above(self, level: float) -> float:
        """Lebesgue measure of {f* > level}."""
        return float(self.breakpoints[int(np.sum(self.levels > level))])

    def integral_up_to(self, t: float) -> float:
        """Integral of f* over (0, t)."""
        if t <= 0 or self.is_zero:
            return 0.0
        widths = np.diff(np.minimum(self.breakpoints, t))
        return float(np.sum(self.levels * widths))

    def dilated(self, factor: float) -> "RearrangementResult":
        """Rearrangement of f(./factor): every breakpoint scaled by factor."""
        return RearrangementResult(self.breakpoints * factor, self.levels)


@dataclass(frozen=True)
class Lp:
    p: float

    def __post_init__(self):
        if not (1.0 <= self.p < math.inf):
            raise ParameterError(f"Lp needs 1 <= p < inf, got {self.p}")

    @property
    def quasi_norm(self) -> bool:
        return False

    @property
    def boyd_exponent(self) -> float:
        return self.p

    def norm_of(self, rr: RearrangementResult) -> float:
        if rr.is_zero:
            return 0.0
        widths = np.diff(rr.breakpoints)
        return float(np.sum(rr.levels ** self.p * widths) ** (1.0 / self.p))

    def dilation_factor(self, t: float) -> float:
        return t ** (1.0 / self.p)

    def describe(self) -> Dict[str, Any]:
        return {"type": "lp", "p": self.p}


@dataclass(frozen=True)
class Lorentz:
    """L^{p,q} with the functional (int (t^{1/p} f*(t))^q dt/t)^{1/q}."""

    p: float
    q: float

    def __post_init__(self):
        if not (1.0 < self.p < math.inf):
            raise ParameterError(f"Lorentz needs 1 < p < inf, got p = {self.p}")
        if not (1.0 <= self.q < math.inf):
            raise ParameterError(f"Lorentz needs 1 <= q < inf, got q = {self.q}")

    @property
    def quasi_norm(self) -> bool:
        return self.q > self.p

    @property
    def boyd_exponent(self) -> float:
        return self.p

    def norm_of(self, rr: RearrangementResult) -> float:
        if rr.is_zero:
            return 0.0
        ratio = self.q / self.p
        powered = rr.breakpoints ** ratio
        total = np.sum(rr.levels ** self.q * np.diff(powered)) / ratio
        return float(total ** (1.0 / self.q))

    def dilation_factor(self, t: float) -> float:
        return t ** (1.0 / self.p)

    def describe(self) -> Dict[str, Any]:
        return {"type": "lorentz", "p": self.p, "q": self.q}


RiSpace = Union[Lp, Lorentz]


@dataclass(frozen=True)
class PhiSpace:
    """The weighted space E_w with |f|_{E_w} = |f*_w|_E; w = 1 is the unweighted E."""

    base: RiSpace
    weight: Weight = UNIT_WEIGHT

    def power_weighted_lp(self) -> Optional[Tuple[float, float]]:
        """(p, alpha) when the space is L^p(t^alpha dt), None otherwise."""
        if not isinstance(self.base, Lp) or not isinstance(self.weight, PowerChain):
            return None
        if len(self.weight.breakpoints):
            return None
        return self.base.p, float(self.weight.exponents[0])

    def describe(self) -> Dict[str, Any]:
        return {"space": self.base.describe(), "weight": self.weight.describe()}


@dataclass(frozen=True)
class NormEstimate:
    """
    A computed norm with its error-bar annotations.

    tail_bound bounds how far the value would move if the data were continued
    past the grid instead of cut to 0; gap is an optimizer suboptimality bound.
    """

    value: float
    tail_bound: float = 0.0
    gap: float = 0.0
    quasi_norm: bool = False
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def relative_tail(self) -> float:
        if self.value == 0:
            return 0.0
        return self.tail_bound / self.value

    def to_dict(self) -> Dict[str, Any]:
        info: Dict[str, Any] = {"value": self.value, "tail_bound": self.tail_bound}
        if self.gap:
            info["optimizer_gap"] = self.gap
        if self.quasi_norm:
            info["quasi_norm"] = True
        if self.details:
            info["details"] = dict(self.details)
        return info
