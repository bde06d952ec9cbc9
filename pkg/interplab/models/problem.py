"""
The abstract Cauchy problem u' + Au = f, u(0) = x0 and the report of its
maximal-regularity quantities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from interplab.models.exceptions import ParameterError
from interplab.models.grid import SampledFunction
from interplab.models.operator import SectorialOperator


@dataclass(frozen=True)
class CauchyProblem:
    """
    Data of u' + Au = f, u(0) = x0.

    The forcing is read as a step function on the grid cells and as its
    first sample on (0, t_min).
    """

    operator: SectorialOperator
    forcing: SampledFunction
    x0: np.ndarray

    def __post_init__(self):
        dim = self.operator.dim
        forcing = self.forcing
        if not forcing.is_vector:
            if dim != 1:
                raise ParameterError(f"Scalar forcing given for a problem of dimension {dim}")
            forcing = forcing.with_values(forcing.values[:, None])
        if forcing.dim != dim:
            raise ParameterError(f"Forcing has dimension {forcing.dim}, operator has {dim}")
        x0 = np.atleast_1d(np.asarray(self.x0))
        if x0.dtype.kind not in "biufc":
            raise ParameterError("Initial value entries must be numeric")
        if x0.shape != (dim,):
            raise ParameterError(f"Initial value must have length {dim}, got shape {x0.shape}")
        if not np.all(np.isfinite(x0)):
            raise ParameterError("Initial value entries must be finite")
        complex_data = self.operator.is_complex or forcing.is_complex or np.iscomplexobj(x0)
        x0 = x0.astype(complex if complex_data else float)
        object.__setattr__(self, "forcing", forcing)
        object.__setattr__(self, "x0", x0)

    @property
    def grid(self):
        return self.forcing.grid

    @property
    def dim(self) -> int:
        return self.operator.dim

    @property
    def dtype(self):
        if self.operator.is_complex or self.forcing.is_complex or np.iscomplexobj(self.x0):
            return complex
        return float


@dataclass
class MRReport:
    """Norms of u', Au and f on (0, T], the interpolation norm of x0 and the solver residual."""

    du_norm: float
    au_norm: float
    f_norm: float
    x0_norm: float
    residual: float
    horizon: float
    tail_bounds: Dict[str, float] = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        denominator = self.f_norm + self.x0_norm
        if denominator == 0:
            return 0.0
        return (self.du_norm + self.au_norm) / denominator

    def to_dict(self) -> Dict[str, Any]:
        return {
            "du_norm": self.du_norm,
            "au_norm": self.au_norm,
            "f_norm": self.f_norm,
            "x0_norm": self.x0_norm,
            "residual": self.residual,
            "horizon": self.horizon,
            "mr_ratio": self.ratio,
            "tail_bounds": dict(self.tail_bounds),
        }
