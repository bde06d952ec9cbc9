from argparse import ArgumentParser, Namespace

from interplab.cli.args_parsers import parse_space
from interplab.functions.ri_norms import boyd_indices, cutoff_membership
from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument
from interplab.presenters.presenter import Presenter


class BoydPresenter(Presenter):
    @property
    def name(self) -> str:
        return "boyd"

    @property
    def description(self) -> str:
        return "Estimates the Boyd indices of a rearrangement-invariant space"

    def configure(self, parser: ArgumentParser) -> None:
        parser.add_argument("--space", required=True, help="lp:P or lorentz:P,Q; a weight only affects membership")

    def execute(self, args: Namespace, grid: LogGrid, document: ReportDocument) -> None:
        space = parse_space(args.space)
        document.config["space"] = space.describe()
        estimate = boyd_indices(space.base)
        document.add_result("p_lower", estimate.lower)
        document.add_result("q_upper", estimate.upper, annotation={"samples": estimate.samples})
        document.add_result("cutoff_membership", cutoff_membership(space).to_dict())
