from argparse import ArgumentParser, Namespace

from interplab.cli.args_parsers import load_vectors, parse_operator, parse_space
from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument
from interplab.operators.sectorial import interp_norm_report
from interplab.presenters.presenter import Presenter


class InterpReportPresenter(Presenter):
    @property
    def name(self) -> str:
        return "interp-report"

    @property
    def description(self) -> str:
        return "Compares the K-method, trace, psi and semigroup norms of (X, dom A)_Phi"

    def configure(self, parser: ArgumentParser) -> None:
        parser.add_argument("--A", dest="operator", required=True,
                            help="CSV matrix file, diag:MU1,..., jordan:KAPPA or rotated:THETA")
        parser.add_argument("--space", required=True, help="lp:P or lorentz:P,Q with an optional @WEIGHT")
        parser.add_argument("--xs", required=True, help="CSV file with one sample vector per row")
        parser.add_argument("--contour", action="store_true",
                            help="evaluate psi(tA) by contour quadrature instead of closed forms")

    def execute(self, args: Namespace, grid: LogGrid, document: ReportDocument) -> None:
        operator = parse_operator(args.operator)
        space = parse_space(args.space)
        xs = load_vectors(args.xs)
        document.config.update({"operator": operator.describe(), "space": space.describe(), "samples": len(xs),
                                "contour": args.contour})
        report = interp_norm_report(operator, space, xs, grid=grid, closed_form=not args.contour)
        document.add_result("worst_constant", report.worst_constant(), annotation={"skipped": report.skipped})
        document.add_result("report", report.to_dict())
