"""
Interpolation couples (X, Y) on a common vector space and the norms they
are built from.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from interplab.models.exceptions import ParameterError
from interplab.models.grid import LogGrid, SampledFunction
from interplab.models.operator import SectorialOperator


class LpNorm:
    """
    x -> |weights * (transform @ x)|_exponent on R^d or C^d.

    Accepts a single vector or a stack of vectors along the last axis.
    """

    def __init__(self, exponent: float = 2.0, weights: Optional[Sequence[float]] = None,
                 transform: Optional[np.ndarray] = None):
        if not (exponent >= 1.0):
            raise ParameterError(f"Norm exponent must be >= 1, got {exponent}")
        self.exponent = float(exponent)
        self.weights = None if weights is None else np.asarray(weights, dtype=float)
        if self.weights is not None and (np.any(self.weights <= 0) or not np.all(np.isfinite(self.weights))):
            raise ParameterError("Norm weights must be positive and finite")
        self.transform = None if transform is None else np.atleast_2d(np.asarray(transform))

    @property
    def is_polyhedral(self) -> bool:
        return self.exponent == 1.0 or math.isinf(self.exponent)

    @property
    def is_complex(self) -> bool:
        return self.transform is not None and np.iscomplexobj(self.transform)

    def mapped(self, x: np.ndarray) -> np.ndarray:
        v = np.asarray(x)
        if self.transform is not None:
            v = v @ self.transform.T
        if self.weights is not None:
            v = v * self.weights
        return v

    def __call__(self, x) -> np.ndarray:
        v = np.abs(self.mapped(x))
        if math.isinf(self.exponent):
            return v.max(axis=-1)
        return np.sum(v ** self.exponent, axis=-1) ** (1.0 / self.exponent)

    def smoothed(self, x, eps: float) -> np.ndarray:
        """Differentiable upper approximation, at most smoothing_bound(eps) above the norm."""
        v = self.mapped(x)
        s = np.sqrt(np.abs(v) ** 2 + eps ** 2)
        if math.isinf(self.exponent):
            beta = math.log(max(v.shape[-1], 2)) / eps
            top = s.max(axis=-1, keepdims=True)
            return top[..., 0] + np.log(np.sum(np.exp(beta * (s - top)), axis=-1)) / beta
        return np.sum(s ** self.exponent, axis=-1) ** (1.0 / self.exponent)

    def smoothing_bound(self, eps: float, dim: int) -> float:
        if math.isinf(self.exponent):
            return 2.0 * eps
        return eps * dim ** (1.0 / self.exponent)

    def output_dim(self, dim: int) -> int:
        return dim if self.transform is None else self.transform.shape[0]

    def with_transform(self, matrix: np.ndarray) -> "LpNorm":
        """The norm x -> |matrix @ x| measured by this norm."""
        matrix = np.atleast_2d(np.asarray(matrix))
        transform = matrix if self.transform is None else self.transform @ matrix
        return LpNorm(self.exponent, self.weights, transform)

    def describe(self) -> Dict[str, Any]:
        info: Dict[str, Any] = {"type": "lp", "exponent": self.exponent}
        if self.weights is not None:
            info["weights"] = self.weights.tolist()
        if self.transform is not None:
            info["transformed"] = True
        return info


class SumNorm:
    """Sum of LpNorms."""

    def __init__(self, parts: Sequence[LpNorm]):
        if not parts:
            raise ParameterError("SumNorm needs at least one part")
        self.parts: List[LpNorm] = list(parts)

    @property
    def is_polyhedral(self) -> bool:
        return all(part.is_polyhedral for part in self.parts)

    @property
    def is_complex(self) -> bool:
        return any(part.is_complex for part in self.parts)

    def __call__(self, x) -> np.ndarray:
        return sum(part(x) for part in self.parts)

    def smoothed(self, x, eps: float) -> np.ndarray:
        return sum(part.smoothed(x, eps) for part in self.parts)

    def smoothing_bound(self, eps: float, dim: int) -> float:
        return sum(part.smoothing_bound(eps, part.output_dim(dim)) for part in self.parts)

    def describe(self) -> Dict[str, Any]:
        return {"type": "sum", "parts": [part.describe() for part in self.parts]}


Norm = Any


class Couple(ABC):
    """An interpolation couple with norms on a common finite-dimensional space."""

    dim: int

    @abstractmethod
    def x_norm(self, v) -> np.ndarray:
        pass

    @abstractmethod
    def y_norm(self, v) -> np.ndarray:
        pass

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        pass

    @property
    def norms(self) -> Tuple[Norm, Norm]:
        """The (X, Y) norm objects, None for couples of functions."""
        return None, None

    @property
    def is_complex(self) -> bool:
        return False

    def vector(self, x) -> np.ndarray:
        """Validate an element of the common space."""
        v = np.asarray(x)
        if v.dtype.kind not in "biufc":
            raise ParameterError("Vector entries must be numeric")
        v = v.astype(complex if (v.dtype.kind == "c" or self.is_complex) else float)
        if v.shape != (self.dim,):
            raise ParameterError(f"Expected a vector of length {self.dim}, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ParameterError("Vector entries must be finite")
        return v


class TrivialCouple(Couple):
    """X = Y with one norm."""

    def __init__(self, dim: int, norm: Optional[LpNorm] = None):
        if dim < 1:
            raise ParameterError("Couple dimension must be positive")
        self.dim = dim
        self.norm = norm or LpNorm(2.0)

    def x_norm(self, v) -> np.ndarray:
        return self.norm(v)

    def y_norm(self, v) -> np.ndarray:
        return self.norm(v)

    @property
    def norms(self) -> Tuple[Norm, Norm]:
        return self.norm, self.norm

    def describe(self) -> Dict[str, Any]:
        return {"type": "trivial", "dim": self.dim, "norm": self.norm.describe()}


class DiagonalCouple(Couple):
    """X = (R^d, l^r) and Y the same norm of (mu_i x_i)."""

    def __init__(self, mu: Sequence[float], exponent: float = 1.0):
        mu = np.asarray(mu, dtype=float).ravel()
        if len(mu) == 0 or np.any(mu <= 0) or not np.all(np.isfinite(mu)):
            raise ParameterError("Diagonal couple scales must be positive and finite")
        self.mu = mu
        self.dim = len(mu)
        self.exponent = float(exponent)
        self.x = LpNorm(exponent)
        self.y = LpNorm(exponent, weights=mu)

    def x_norm(self, v) -> np.ndarray:
        return self.x(v)

    def y_norm(self, v) -> np.ndarray:
        return self.y(v)

    @property
    def norms(self) -> Tuple[Norm, Norm]:
        return self.x, self.y

    def describe(self) -> Dict[str, Any]:
        return {"type": "diag", "mu": self.mu.tolist(), "exponent": self.exponent}


class FiniteDimCouple(Couple):
    """Two arbitrary norms on R^d, checked by random homogeneity and triangle probes."""

    def __init__(self, dim: int, x: Norm, y: Norm, probes: int = 64, rng: Optional[np.random.Generator] = None):
        if not (1 <= dim):
            raise ParameterError("Couple dimension must be positive")
        self.dim = dim
        self.x = x
        self.y = y
        if probes:
            from interplab.config import LabConfig

            self._check_norms(probes, rng or LabConfig.make_rng(7))

    def _check_norms(self, probes: int, rng: np.random.Generator) -> None:
        u = rng.standard_normal((probes, self.dim))
        v = rng.standard_normal((probes, self.dim))
        c = rng.uniform(-3.0, 3.0, size=probes)
        for label, norm in (("X", self.x), ("Y", self.y)):
            nu, nv, nsum = norm(u), norm(v), norm(u + v)
            scaled = norm(c[:, None] * u)
            if np.any(nu <= 0):
                raise ParameterError(f"{label} norm vanishes on a nonzero probe vector")
            if np.any(np.abs(scaled - np.abs(c) * nu) > 1e-9 * (1 + np.abs(c) * nu)):
                raise ParameterError(f"{label} norm is not absolutely homogeneous")
            if np.any(nsum > (nu + nv) * (1 + 1e-9)):
                raise ParameterError(f"{label} norm violates the triangle inequality")

    @property
    def is_complex(self) -> bool:
        return getattr(self.x, "is_complex", False) or getattr(self.y, "is_complex", False)

    def x_norm(self, v) -> np.ndarray:
        return self.x(v)

    def y_norm(self, v) -> np.ndarray:
        return self.y(v)

    @property
    def norms(self) -> Tuple[Norm, Norm]:
        return self.x, self.y

    def describe(self) -> Dict[str, Any]:
        return {"type": "general", "dim": self.dim, "x": self.x.describe(), "y": self.y.describe()}


class L1LinfCouple(Couple):
    """(L^1, L^inf) of functions sampled on one grid; vectors are sample arrays."""

    def __init__(self, grid: LogGrid):
        self.grid = grid
        self.dim = grid.n

    def function(self, v) -> SampledFunction:
        if isinstance(v, SampledFunction):
            if v.grid != self.grid:
                raise ParameterError("Function is sampled on a different grid than the couple")
            return v
        return SampledFunction(self.grid, np.asarray(v))

    def _model_values(self, v):
        from interplab.numerics.grids import cell_model

        model = cell_model(self.function(v)).body_only()
        return model, np.abs(model.values)

    def x_norm(self, v) -> float:
        model, values = self._model_values(v)
        return float(np.sum(values * np.diff(model.edges)))

    def y_norm(self, v) -> float:
        _, values = self._model_values(v)
        return float(values.max()) if len(values) else 0.0

    def describe(self) -> Dict[str, Any]:
        return {"type": "l1linf", "grid": [self.grid.t_min, self.grid.t_max, self.grid.n]}


class DomainCouple(Couple):
    """(X, dom A) with |x|_Y = |x|_X + |Ax|_X; X is l1 unless another base norm is given."""

    def __init__(self, operator: SectorialOperator, base: Optional[LpNorm] = None):
        self.operator = operator
        self.dim = operator.dim
        self.base = base or LpNorm(1.0)
        self.graph = SumNorm([self.base, self.base.with_transform(operator.matrix)])

    @property
    def is_complex(self) -> bool:
        return self.operator.is_complex

    def x_norm(self, v) -> np.ndarray:
        return self.base(v)

    def y_norm(self, v) -> np.ndarray:
        return self.graph(v)

    @property
    def norms(self) -> Tuple[Norm, Norm]:
        return self.base, self.graph

    def describe(self) -> Dict[str, Any]:
        return {"type": "domain", "operator": self.operator.describe(), "base": self.base.describe()}
