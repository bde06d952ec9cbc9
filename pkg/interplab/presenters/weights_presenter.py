import math
from argparse import ArgumentParser, Namespace

from interplab.cli.args_parsers import parse_space, parse_weight
from interplab.functions.weight_classes import classify, probe_space_inclusion
from interplab.models.exceptions import ParameterError
from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument
from interplab.presenters.presenter import Presenter


class WeightsPresenter(Presenter):
    @property
    def name(self) -> str:
        return "weights"

    @property
    def description(self) -> str:
        return "Classifies a weight into M_p, M^p, A_p^-, A_p^+ and C_p"

    def configure(self, parser: ArgumentParser) -> None:
        parser.add_argument("action", choices=["classify", "probe"])
        parser.add_argument("--weight", required=True, help="pow:ALPHA, pp:ALPHA,BETA or file:PATH")
        parser.add_argument("--p", type=float, default=None, help="exponent for classify")
        parser.add_argument("--decades", type=float, default=None, help="sweep range in decades")
        parser.add_argument("--space", default=None, help="base space for probe, e.g. lp:2")

    def execute(self, args: Namespace, grid: LogGrid, document: ReportDocument) -> None:
        weight = parse_weight(args.weight)
        document.config["weight"] = weight.describe()
        if args.action == "probe":
            if args.space is None:
                raise ParameterError("weights probe needs --space")
            space = parse_space(args.space)
            document.config["space"] = space.describe()
            document.add_result("probe", probe_space_inclusion(weight, space.base), annotation="exploratory")
            return

        if args.p is None:
            raise ParameterError("weights classify needs --p")
        report = classify(weight, args.p, args.decades)
        document.config["p"] = args.p
        document.add_result("classification", report.to_dict())
        document.add_result("verdicts", {k: v.value for k, v in report.verdicts.items()},
                            annotation={k: c.reason for k, c in report.constants.items()})
        for key, estimate in report.constants.items():
            document.add_curve(key, [(d, v) for d, v in estimate.curve if math.isfinite(v)])
