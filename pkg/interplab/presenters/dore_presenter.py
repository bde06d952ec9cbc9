from argparse import ArgumentParser, Namespace

import numpy as np

from interplab.cli.args_parsers import load_vectors, parse_operator, parse_space
from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument
from interplab.operators.sectorial import dore_family, dore_ratio
from interplab.presenters.presenter import Presenter


class DorePresenter(Presenter):
    @property
    def name(self) -> str:
        return "dore"

    @property
    def description(self) -> str:
        return "Normalized interpolation norms of f(A) over a bounded holomorphic family"

    def configure(self, parser: ArgumentParser) -> None:
        parser.add_argument("--A", dest="operator", required=True,
                            help="CSV matrix file, diag:MU1,..., jordan:KAPPA or rotated:THETA")
        parser.add_argument("--space", required=True, help="lp:P or lorentz:P,Q with an optional @WEIGHT")
        parser.add_argument("--family", choices=["default", "mobius", "imaginary"], default="default")
        parser.add_argument("--xs", default=None, help="CSV file of sample vectors; basis vectors by default")

    def execute(self, args: Namespace, grid: LogGrid, document: ReportDocument) -> None:
        operator = parse_operator(args.operator)
        space = parse_space(args.space)
        family_name = "mobius" if args.family == "default" else args.family
        xs = load_vectors(args.xs) if args.xs else list(np.eye(operator.dim))
        document.config.update({"operator": operator.describe(), "space": space.describe(),
                                "family": family_name, "samples": len(xs)})
        report = dore_ratio(operator, space, dore_family(family_name), xs, grid=grid)
        document.add_result("dore_ratio", report.value,
                            annotation={"growth": report.growth, "spread": report.spread})
        document.add_result("report", report.to_dict())
