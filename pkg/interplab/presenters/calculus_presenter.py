from argparse import ArgumentParser, Namespace

import numpy as np

from interplab.cli.args_parsers import parse_contour, parse_function, parse_operator
from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument
from interplab.numerics.linalg import function_by_eigen
from interplab.operators.sectorial import apply_function, default_contour
from interplab.presenters.presenter import Presenter


def _matrix_entry(m: np.ndarray):
    if np.iscomplexobj(m):
        return {"re": m.real.tolist(), "im": m.imag.tolist()}
    return m.tolist()


class CalculusPresenter(Presenter):
    @property
    def name(self) -> str:
        return "calculus"

    @property
    def description(self) -> str:
        return "Evaluates f(A) by contour quadrature and compares it with the eigen-decomposition"

    def configure(self, parser: ArgumentParser) -> None:
        parser.add_argument("--A", dest="operator", required=True,
                            help="CSV matrix file, diag:MU1,..., jordan:KAPPA or rotated:THETA")
        parser.add_argument("--f", dest="function", required=True,
                            help="e, psi-exp, psi-res, gamma[:ALPHA], resolvent, one, mobius:K or imag:TAU")
        parser.add_argument("--contour", default=None, help="beta,rmin,rmax,npd")

    def execute(self, args: Namespace, grid: LogGrid, document: ReportDocument) -> None:
        operator = parse_operator(args.operator)
        f = parse_function(args.function)
        contour = parse_contour(args.contour) if args.contour else None
        document.config.update({
            "operator": operator.describe(),
            "function": f.name,
            "contour": (contour or default_contour(operator, f)).describe(),
        })
        value = apply_function(f, operator, contour)
        document.add_result("f(A)", _matrix_entry(value))
        oracle = function_by_eigen(operator.matrix, f)
        if oracle is None:
            document.annotations["f(A)"] = "eigenvectors ill-conditioned; no eigen oracle"
            return
        scale = max(1.0, float(np.abs(oracle).max()))
        document.add_result("eigen_residual", float(np.abs(value - oracle).max() / scale))
