from interplab.models.exceptions import (
    InterpLabError,
    ParameterError,
    SpecFormatError,
    DomainError,
    SingularityError,
    InvertibilityError,
    EstimationError,
    RearrangementUndefinedError,
    TrivialSpaceError,
    ContourRangeError,
    RefinementError,
    SolverError,
)
from interplab.models.grid import LogGrid, SampledFunction, EdgeFit, CellModel
from interplab.models.weight import (
    Weight,
    PowerChain,
    Power,
    PiecewisePower,
    ExplicitWeight,
    ProductWeight,
    UNIT_WEIGHT,
)
from interplab.models.spaces import RearrangementResult, Lp, Lorentz, PhiSpace, NormEstimate
from interplab.models.report import Verdict, ConstantEstimate, WeightClassReport, ReportDocument
from interplab.models.operator import SectorialOperator, H0Function, EClassFunction, HInfFunction, Contour
from interplab.models.couple import (
    LpNorm,
    SumNorm,
    Couple,
    TrivialCouple,
    DiagonalCouple,
    FiniteDimCouple,
    L1LinfCouple,
    DomainCouple,
)
from interplab.models.problem import CauchyProblem, MRReport


__all__ = [
    "InterpLabError",
    "ParameterError",
    "SpecFormatError",
    "DomainError",
    "SingularityError",
    "InvertibilityError",
    "EstimationError",
    "RearrangementUndefinedError",
    "TrivialSpaceError",
    "ContourRangeError",
    "RefinementError",
    "SolverError",
    "LogGrid",
    "SampledFunction",
    "EdgeFit",
    "CellModel",
    "Weight",
    "PowerChain",
    "Power",
    "PiecewisePower",
    "ExplicitWeight",
    "ProductWeight",
    "UNIT_WEIGHT",
    "RearrangementResult",
    "Lp",
    "Lorentz",
    "PhiSpace",
    "NormEstimate",
    "Verdict",
    "ConstantEstimate",
    "WeightClassReport",
    "ReportDocument",
    "SectorialOperator",
    "H0Function",
    "EClassFunction",
    "HInfFunction",
    "Contour",
    "LpNorm",
    "SumNorm",
    "Couple",
    "TrivialCouple",
    "DiagonalCouple",
    "FiniteDimCouple",
    "L1LinfCouple",
    "DomainCouple",
    "CauchyProblem",
    "MRReport",
]
