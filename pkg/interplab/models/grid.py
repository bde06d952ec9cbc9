"""
Log-uniform grids on (0, inf) and functions sampled on them.

A SampledFunction is read as a step function: the value at node t_i holds
on the geometric cell [t_i r^(-1/2), t_i r^(1/2)), r the grid ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from interplab.models.exceptions import ParameterError


@dataclass(frozen=True)
class LogGrid:
    """Log-uniform nodes t_min = t_0 < ... < t_{n-1} = t_max."""

    t_min: float
    t_max: float
    n: int
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.t_min) and math.isfinite(self.t_max)):
            raise ParameterError(f"Grid bounds must be finite, got ({self.t_min}, {self.t_max})")
        if not (0 < self.t_min < self.t_max):
            raise ParameterError(f"Grid needs 0 < t_min < t_max, got ({self.t_min}, {self.t_max})")
        if int(self.n) != self.n or self.n < 2:
            raise ParameterError(f"Grid needs at least 2 nodes, got {self.n}")
        nodes = np.geomspace(self.t_min, self.t_max, int(self.n))
        nodes.setflags(write=False)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "nodes", nodes)

    @property
    def log_step(self) -> float:
        """Spacing h of the nodes in the variable log t."""
        return math.log(self.t_max / self.t_min) / (self.n - 1)

    @property
    def ratio(self) -> float:
        return math.exp(self.log_step)

    @property
    def nodes_per_decade(self) -> float:
        return math.log(10.0) / self.log_step

    @property
    def edges(self) -> np.ndarray:
        """Cell edges, n + 1 of them; edges[i] < nodes[i] < edges[i + 1]."""
        half = math.exp(0.5 * self.log_step)
        return np.concatenate(([self.nodes[0] / half], self.nodes * half))

    @property
    def cell_lengths(self) -> np.ndarray:
        return np.diff(self.edges)

    def refine(self, factor: int) -> "LogGrid":
        """Grid over the same interval with every log step split into `factor` parts."""
        if factor < 1:
            raise ParameterError(f"Refinement factor must be >= 1, got {factor}")
        return LogGrid(self.t_min, self.t_max, (self.n - 1) * factor + 1)

    def decade_mask(self, at_start: bool) -> np.ndarray:
        """Nodes within one decade of t_min (or of t_max)."""
        if at_start:
            return self.nodes <= self.t_min * 10.0 * (1 + 1e-12)
        return self.nodes >= self.t_max / 10.0 * (1 - 1e-12)


@dataclass(frozen=True)
class SampledFunction:
    """Scalar (shape (n,)) or vector-valued (shape (n, d)) samples on a LogGrid."""

    grid: LogGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.dtype.kind not in "biufc":
            raise ParameterError("Sampled values must be numeric")
        if values.dtype.kind in "biu":
            values = values.astype(float)
        if values.ndim not in (1, 2) or values.shape[0] != self.grid.n:
            raise ParameterError(
                f"Expected {self.grid.n} samples (optionally vector-valued), got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ParameterError("Sampled values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, grid: LogGrid, fn: Callable[[np.ndarray], np.ndarray]) -> "SampledFunction":
        """Sample fn at the grid nodes (fn receives the whole node array)."""
        return cls(grid, np.asarray(fn(grid.nodes)))

    @classmethod
    def zeros(cls, grid: LogGrid, dim: Optional[int] = None) -> "SampledFunction":
        shape = (grid.n,) if dim is None else (grid.n, dim)
        return cls(grid, np.zeros(shape))

    @property
    def is_vector(self) -> bool:
        return self.values.ndim == 2

    @property
    def dim(self) -> int:
        return 1 if self.values.ndim == 1 else self.values.shape[1]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def with_values(self, values: np.ndarray) -> "SampledFunction":
        return SampledFunction(self.grid, values)

    def pointwise_norm(self, norm: Callable[[np.ndarray], np.ndarray]) -> "SampledFunction":
        """
        Reduce a vector-valued function to t -> |f(t)|.

        Args:
            norm: maps an (n, d) array to the n row norms
        """
        if not self.is_vector:
            return SampledFunction(self.grid, np.abs(self.values))
        return SampledFunction(self.grid, np.asarray(norm(self.values), dtype=float))

    def restricted(self, horizon: float) -> "SampledFunction":
        """Zero the samples at nodes beyond the horizon."""
        values = np.array(self.values)
        values[self.grid.nodes > horizon] = 0
        return SampledFunction(self.grid, values)

    def __abs__(self) -> "SampledFunction":
        if self.is_vector:
            return self.pointwise_norm(lambda v: np.linalg.norm(v, axis=1))
        return SampledFunction(self.grid, np.abs(self.values))

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        if not isinstance(other, SampledFunction):
            return NotImplemented
        if other.grid != self.grid:
            raise ParameterError("Cannot add functions sampled on different grids")
        return SampledFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        if not isinstance(other, SampledFunction):
            return NotImplemented
        if other.grid != self.grid:
            raise ParameterError("Cannot subtract functions sampled on different grids")
        return SampledFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar) -> "SampledFunction":
        if not np.isscalar(scalar):
            return NotImplemented
        return SampledFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class EdgeFit:
    """
    Continuation of a sampled function past one end of its grid.

    Near the anchor the function is modelled as level * (t / anchor) ** exponent.
    A vector or complex function is continued with exponent 0.
    """

    anchor: float
    level: np.ndarray
    exponent: float

    @property
    def is_zero(self) -> bool:
        return not np.any(self.level)

    def __call__(self, t: np.ndarray) -> np.ndarray:
        scale = (np.asarray(t, dtype=float) / self.anchor) ** self.exponent
        if np.ndim(self.level) == 0:
            return self.level * scale
        return np.multiply.outer(scale, self.level)


@dataclass(frozen=True)
class CellModel:
    """
    Step-function model of a sampled function including its continuation.

    edges has one more entry than values; edges[0] is 0 when a head piece
    reaching down to 0 is present. body is the slice of cells that carry the
    grid samples themselves.
    """

    edges: np.ndarray
    values: np.ndarray
    body: slice
    head_fit: EdgeFit
    tail_fit: EdgeFit

    @property
    def lefts(self) -> np.ndarray:
        return self.edges[:-1]

    @property
    def rights(self) -> np.ndarray:
        return self.edges[1:]

    def body_only(self) -> "CellModel":
        edges = self.edges[self.body.start:self.body.stop + 1]
        return CellModel(edges, self.values[self.body], slice(0, len(edges) - 1), self.head_fit, self.tail_fit)
