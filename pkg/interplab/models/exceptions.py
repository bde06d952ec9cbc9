from typing import Any, Mapping, Optional


class InterpLabError(Exception):
    """General exception for the interplab toolkit."""
    pass


class ParameterError(ValueError, InterpLabError):
    """Raised when an argument is outside its admissible range."""
    def __init__(self, message: str):
        super().__init__(message)


class SpecFormatError(ParameterError):
    """Raised when a command-line mini-language spec cannot be parsed."""
    def __init__(self, kind: str, spec: str, hint: str = ""):
        message = f"Invalid {kind} spec: '{spec}'."
        if hint:
            message = f"{message} Expected {hint}."
        super().__init__(message)


class DomainError(InterpLabError):
    """Raised when an input lies outside the domain of an operation (interval off-grid, divergent tail)."""
    pass


class SingularityError(InterpLabError):
    """Raised when a point hits the spectrum of a matrix (resolvent undefined)."""
    pass


class InvertibilityError(InterpLabError):
    """Raised when an operation needs an invertible operator and gets a singular one."""
    pass


class RearrangementUndefinedError(InterpLabError):
    """Raised when a superlevel set of a positive level has infinite weighted measure."""
    def __init__(self, level: float):
        self.level = level
        super().__init__(f"Superlevel set {{|f| > {level:.6g}}} has infinite measure; rearrangement undefined.")


class TrivialSpaceError(InterpLabError):
    """Raised when min(1, 1/t) is not in the parameter space, so the interpolation space is {0}."""
    pass


class ContourRangeError(InterpLabError):
    """Raised when no admissible contour range brings the truncation bound below tolerance."""
    pass


class RefinementError(InterpLabError):
    """Raised when a construction needs more depth or resolution than the grid provides."""
    pass


class SolverError(InterpLabError):
    """Raised when a time stepper cannot advance the Cauchy problem."""
    pass


class EstimationError(InterpLabError):
    """Raised when a fit or an optimizer fails; carries diagnostics for the report."""
    def __init__(self, message: str, diagnostics: Optional[Mapping[str, Any]] = None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)
