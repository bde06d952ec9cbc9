import os
from argparse import ArgumentParser, Namespace

from interplab.cli.args_parsers import load_step_function, parse_couple, parse_space, parse_vector
from interplab.models.couple import L1LinfCouple
from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument
from interplab.operators.couples import embedding_bracket, k_curve, k_method_norm, trace_method_norm
from interplab.presenters.presenter import Presenter


class KNormPresenter(Presenter):
    @property
    def name(self) -> str:
        return "knorm"

    @property
    def description(self) -> str:
        return "K-method and trace-method norms of a vector in (X, Y)_Phi"

    def configure(self, parser: ArgumentParser) -> None:
        parser.add_argument("--couple", required=True,
                            help="trivial:D, diag:MU1,...,MUd, general:D,P,Q, domain:OPERATOR or l1linf")
        parser.add_argument("--space", required=True, help="lp:P or lorentz:P,Q with an optional @WEIGHT")
        parser.add_argument("--x", required=True, help="x1,x2,... or a CSV file (t,value rows for l1linf)")
        parser.add_argument("--curve", action="store_true", help="record t -> K(t, x) for --csv")

    def execute(self, args: Namespace, grid: LogGrid, document: ReportDocument) -> None:
        couple = parse_couple(args.couple, grid)
        space = parse_space(args.space)
        document.config.update({"couple": couple.describe(), "space": space.describe()})
        if isinstance(couple, L1LinfCouple) and os.path.isfile(args.x):
            x = load_step_function(args.x, grid, "x").values
        else:
            x = parse_vector(args.x)

        k_norm = k_method_norm(couple, space, x, grid)
        document.add_result("k_method_norm", k_norm.value, annotation=k_norm.to_dict())
        document.add_result("embedding_bracket", embedding_bracket(couple, space, x, grid))
        if isinstance(couple, L1LinfCouple):
            document.annotations["trace_method_norm"] = "not available for couples of functions"
        else:
            trace = trace_method_norm(couple, space, x, grid)
            document.add_result("trace_method_norm", trace.value, annotation=trace.to_dict())
            document.add_result("ratio", trace.value / k_norm.value if k_norm.value else 0.0)
        if args.curve:
            curve = k_curve(couple, x, grid)
            document.add_curve("K", zip(grid.nodes, curve.values))
