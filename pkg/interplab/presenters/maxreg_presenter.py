from argparse import ArgumentParser, Namespace

import numpy as np

from interplab.cli.args_parsers import parse_forcing, parse_operator, parse_space, parse_vector
from interplab.models.couple import DomainCouple
from interplab.models.grid import LogGrid
from interplab.models.problem import CauchyProblem
from interplab.models.report import ReportDocument
from interplab.operators.couples import k_method_norm
from interplab.operators.maxreg import mr_constant_estimate, mr_seminorms, solve_cauchy
from interplab.presenters.presenter import Presenter
from interplab.utils.random_catalog import generate_forcing_family


class MaxRegPresenter(Presenter):
    @property
    def name(self) -> str:
        return "maxreg"

    @property
    def description(self) -> str:
        return "Solves u' + Au = f, u(0) = x0 exactly and measures its maximal-regularity ratio"

    def configure(self, parser: ArgumentParser) -> None:
        parser.add_argument("--A", dest="operator", required=True,
                            help="CSV matrix file, diag:MU1,..., jordan:KAPPA or rotated:THETA")
        parser.add_argument("--space", required=True, help="lp:P or lorentz:P,Q with an optional @WEIGHT")
        parser.add_argument("--f", dest="forcing", default="zero",
                            help="zero, const:C1,..., step:A,C1,..., power:GAMMA,C1,... or file:PATH")
        parser.add_argument("--x0", default=None, help="x1,x2,... or a CSV file; zero by default")
        parser.add_argument("--T", dest="horizon", type=float, default=None, help="horizon, t_max by default")
        parser.add_argument("--sweep", action="store_true", help="estimate the constant over a seeded family")
        parser.add_argument("--family-size", type=int, default=6)

    def execute(self, args: Namespace, grid: LogGrid, document: ReportDocument) -> None:
        operator = parse_operator(args.operator)
        space = parse_space(args.space)
        forcing = parse_forcing(args.forcing, grid, operator.dim)
        x0 = parse_vector(args.x0) if args.x0 else np.zeros(operator.dim)
        document.config.update({"operator": operator.describe(), "space": space.describe(),
                                "forcing": args.forcing, "horizon": args.horizon})

        if args.sweep:
            family = [(forcing, x0)] + list(generate_forcing_family(grid, operator.dim, args.family_size))
            estimate = mr_constant_estimate(operator, space, family, args.horizon)
            document.add_result("mr_constant", estimate.value,
                                annotation={"split_agreement": estimate.split_agreement})
            document.add_result("sweep", estimate.to_dict())
            return

        problem = CauchyProblem(operator, forcing, x0)
        solution = solve_cauchy(problem)
        x0_norm = 0.0
        if np.any(problem.x0):
            x0_norm = k_method_norm(DomainCouple(operator), space, problem.x0, grid).value
        report = mr_seminorms(solution, problem, space, args.horizon, x0_norm=x0_norm)
        document.add_result("mr_ratio", report.ratio,
                            annotation={"residual": report.residual, "tail_bounds": report.tail_bounds})
        document.add_result("report", report.to_dict())
