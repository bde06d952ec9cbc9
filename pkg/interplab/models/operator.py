"""
Sectorial matrices, holomorphic functions on sectors and integration
contours for the functional calculus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional

import numpy as np

from interplab.models.exceptions import ParameterError

ComplexFn = Callable[[np.ndarray], np.ndarray]
MatrixFn = Callable[[np.ndarray], np.ndarray]


class SectorialOperator:
    """
    A dense matrix A read as a sectorial operator.

    angle_estimate is the largest |arg| of a nonzero eigenvalue; rho is the
    geometric mean of the nonzero eigenvalue moduli and fixes the scale of
    integration contours.
    """

    def __init__(self, matrix, name: str = ""):
        from interplab.numerics.linalg import as_matrix, is_invertible

        m = np.array(as_matrix(matrix))
        m.setflags(write=False)
        eigenvalues = np.linalg.eigvals(m)
        scale = max(np.abs(eigenvalues).max(), np.finfo(float).tiny)
        nonzero = eigenvalues[np.abs(eigenvalues) > 1e-12 * scale]
        args = np.abs(np.angle(nonzero)) if len(nonzero) else np.zeros(1)
        if args.max() >= math.pi * (1 - 1e-12):
            raise ParameterError("Matrix has an eigenvalue on the negative real axis; it is not sectorial")
        self.matrix = m
        self.name = name
        self.eigenvalues = eigenvalues
        self.angle_estimate = float(args.max())
        self.invertible = is_invertible(m)
        self.rho = float(np.exp(np.mean(np.log(np.abs(nonzero))))) if len(nonzero) else 1.0

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.matrix)

    def working_angle(self, semigroup: bool = False, cap: Optional[float] = None) -> float:
        """pi/4 above the spectral angle, kept below pi/2 for semigroups and below pi (or cap) otherwise."""
        if cap is None:
            cap = math.pi / 2 if semigroup else math.pi
        if self.angle_estimate >= cap:
            raise ParameterError(
                f"Spectral angle {self.angle_estimate:.4g} is not below the admissible sector angle {cap:.4g}"
            )
        return min(self.angle_estimate + math.pi / 4, 0.5 * (self.angle_estimate + cap))

    def contour_angle(self, semigroup: bool = False, cap: Optional[float] = None) -> float:
        return 0.5 * (self.angle_estimate + self.working_angle(semigroup, cap))

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dim": self.dim,
            "angle_estimate": self.angle_estimate,
            "invertible": self.invertible,
            "rho": self.rho,
        }

    def __repr__(self) -> str:
        return f"SectorialOperator({self.name or self.dim})"


@dataclass(frozen=True)
class H0Function:
    """
    f with |f(z)| <= constant * min(|z|^decay, |z|^-decay_at_infinity) for |arg z| < sector_angle.

    matrix_form, when given, evaluates f(A) in closed form.
    """

    evaluator: ComplexFn
    decay: float
    constant: float = 1.0
    name: str = ""
    decay_at_infinity: Optional[float] = None
    matrix_form: Optional[MatrixFn] = None
    sector_angle: float = math.pi

    def __post_init__(self):
        if not self.decay > 0:
            raise ParameterError(f"H0 functions need a positive decay exponent, got {self.decay}")
        if self.decay_at_infinity is not None and not self.decay_at_infinity > 0:
            raise ParameterError("decay_at_infinity must be positive")

    @property
    def infinity_decay(self) -> float:
        return self.decay if self.decay_at_infinity is None else self.decay_at_infinity

    def __call__(self, z) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(z, dtype=complex)))

    def bound(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        near = r ** self.decay
        far = np.zeros_like(r) if math.isinf(self.infinity_decay) else r ** (-self.infinity_decay)
        return self.constant * np.where(r <= 1, near, far)


@dataclass(frozen=True)
class EClassFunction:
    """f = f0 + lam (1 + z)^-1 + mu with f0 in H0."""

    h0: Optional[H0Function] = None
    resolvent_coeff: complex = 0.0
    constant: complex = 0.0
    name: str = ""
    matrix_form: Optional[MatrixFn] = None

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        value = self.resolvent_coeff / (1.0 + z) + self.constant
        if self.h0 is not None:
            value = value + self.h0(z)
        return value


@dataclass(frozen=True)
class HInfFunction:
    """A bounded holomorphic function on |arg z| < sector_angle; sup_bound(phi) bounds |f| on S_phi."""

    evaluator: ComplexFn
    sup_bound: Callable[[float], float]
    name: str = ""
    matrix_form: Optional[MatrixFn] = None
    sector_angle: float = math.pi

    def __call__(self, z) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(z, dtype=complex)))


HolFunction = Any


@dataclass(frozen=True)
class Contour:
    """The two rays r e^{+-i beta}, r log-uniform in [r_min, r_max]."""

    beta: float
    r_min: float
    r_max: float
    nodes_per_decade: int = 40

    def __post_init__(self):
        if not (0 < self.beta < math.pi):
            raise ParameterError(f"Contour angle must lie in (0, pi), got {self.beta}")
        if not (0 < self.r_min < self.r_max) or not math.isfinite(self.r_max):
            raise ParameterError(f"Contour needs 0 < r_min < r_max < inf, got ({self.r_min}, {self.r_max})")
        if self.nodes_per_decade < 1:
            raise ParameterError("Contour needs at least one node per decade")

    @property
    def decades(self) -> float:
        return math.log10(self.r_max / self.r_min)

    @property
    def radii(self) -> np.ndarray:
        count = int(math.ceil(self.decades * self.nodes_per_decade)) + 1
        return np.geomspace(self.r_min, self.r_max, count)

    @property
    def log_step(self) -> float:
        radii = self.radii
        return math.log(radii[1] / radii[0])

    def widened(self, lower_decades: int, upper_decades: int) -> "Contour":
        return Contour(self.beta, self.r_min / 10.0 ** lower_decades, self.r_max * 10.0 ** upper_decades,
                       self.nodes_per_decade)

    def describe(self) -> Dict[str, Any]:
        return {"beta": self.beta, "r_min": self.r_min, "r_max": self.r_max,
                "nodes_per_decade": self.nodes_per_decade}
