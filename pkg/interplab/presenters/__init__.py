from .weights_presenter import WeightsPresenter
from .hardy_presenter import HardyPresenter
from .knorm_presenter import KNormPresenter
from .calculus_presenter import CalculusPresenter
from .interp_report_presenter import InterpReportPresenter
from .dore_presenter import DorePresenter
from .maxreg_presenter import MaxRegPresenter
from .boyd_presenter import BoydPresenter
from .show_help_presenter import ShowHelpPresenter


__all__ = [
    "WeightsPresenter",
    "HardyPresenter",
    "KNormPresenter",
    "CalculusPresenter",
    "InterpReportPresenter",
    "DorePresenter",
    "MaxRegPresenter",
    "BoydPresenter",
    "ShowHelpPresenter",
]
