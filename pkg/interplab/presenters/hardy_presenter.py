from argparse import ArgumentParser, Namespace

from interplab.cli.args_parsers import load_step_function, parse_space
from interplab.functions.hardy import OPERATORS, calderon_classification, hardy_test_family, opnorm_lower
from interplab.functions.ri_norms import FamilyMember
from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument
from interplab.presenters.presenter import Presenter


class HardyPresenter(Presenter):
    @property
    def name(self) -> str:
        return "hardy"

    @property
    def description(self) -> str:
        return "Lower bounds for the norms of P, Q and P + Q on a weighted space"

    def configure(self, parser: ArgumentParser) -> None:
        parser.add_argument("--op", choices=list(OPERATORS), default="P")
        parser.add_argument("--space", required=True, help="lp:P or lorentz:P,Q with an optional @WEIGHT")
        parser.add_argument("--family", default="default",
                            help="'default' or a CSV file t,f1,f2,... of step functions")

    def execute(self, args: Namespace, grid: LogGrid, document: ReportDocument) -> None:
        space = parse_space(args.space)
        document.config.update({"space": space.describe(), "operator": args.op, "family": args.family})
        if args.family == "default":
            family = hardy_test_family(grid, space)
        else:
            table = load_step_function(args.family, grid, "family")
            columns = table.values if table.is_vector else table.values[:, None]
            family = [FamilyMember(f"column {i + 1}", table.with_values(columns[:, i]))
                      for i in range(columns.shape[1])]
        report = opnorm_lower(args.op, space, family)
        document.add_result("opnorm_lower", report.lower_bound,
                            annotation={"max_relative_tail": report.max_relative_tail,
                                        "analytic_upper": report.analytic_upper})
        document.add_result("report", report.to_dict())
        document.add_result("boundedness", calderon_classification(space).to_dict())
