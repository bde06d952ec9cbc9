"""
Parsers for the command-line mini-languages: weights, spaces, couples,
operators, holomorphic functions, forcing terms and data files.
"""

import math
import os
from collections import deque
from typing import Deque, List, Tuple

import numpy as np

from interplab.models.couple import (
    Couple,
    DiagonalCouple,
    DomainCouple,
    FiniteDimCouple,
    L1LinfCouple,
    LpNorm,
    TrivialCouple,
)
from interplab.models.exceptions import ParameterError, SpecFormatError
from interplab.models.grid import LogGrid, SampledFunction
from interplab.models.operator import SectorialOperator
from interplab.models.spaces import Lorentz, Lp, PhiSpace
from interplab.models.weight import UNIT_WEIGHT, ExplicitWeight, PiecewisePower, Power, Weight

WEIGHT_HINT = "pow:ALPHA, pp:ALPHA,BETA or file:PATH"
SPACE_HINT = "lp:P or lorentz:P,Q, optionally followed by @WEIGHT"
COUPLE_HINT = "trivial:D, diag:MU1,...,MUd, general:D,P,Q, domain:OPERATOR or l1linf"
OPERATOR_HINT = "a CSV matrix file, diag:MU1,...,MUd, jordan:KAPPA or rotated:THETA"
FUNCTION_HINT = "e, psi-exp, psi-res, gamma[:ALPHA], resolvent, one, mobius:K or imag:TAU"
FORCING_HINT = "zero, const:C1,...,Cd, step:A,C1,...,Cd, power:GAMMA,C1,...,Cd or file:PATH"


def parse_spec(text: str) -> Tuple[str, List[str]]:
    """
    Split 'kind:a,b,c' into the lowercased kind and its arguments.

    Only the first colon separates the kind, so file paths keep theirs.
    """
    text = text.strip()
    if not text:
        return "empty", []
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "file":
        return kind, [rest.strip()] if rest.strip() else []
    args = [part.strip() for part in rest.split(",")] if rest.strip() else []
    return kind, args


class SpecArgs:
    """
    Sequential access to the arguments of one mini-language spec.

    Every failure is reported as a SpecFormatError naming the offending text and the
    expected grammar.
    """

    def __init__(self, kind: str, spec: str, args: List[str], hint: str):
        self.kind = kind
        self.spec = spec
        self.hint = hint
        self.args: Deque[str] = deque(args)

    def fail(self) -> SpecFormatError:
        return SpecFormatError(self.kind, self.spec, self.hint)

    def get_next(self) -> str:
        if not self.args:
            raise self.fail()
        return self.args.popleft()

    def get_float(self) -> float:
        try:
            value = float(self.get_next())
        except ValueError:
            raise self.fail()
        if not math.isfinite(value):
            raise self.fail()
        return value

    def get_int(self) -> int:
        try:
            return int(self.get_next())
        except ValueError:
            raise self.fail()

    def get_remaining_floats(self) -> List[float]:
        """All remaining arguments as floats; at least one is required."""
        if not self.args:
            raise self.fail()
        values = []
        while self.args:
            values.append(self.get_float())
        return values

    def has_next(self) -> bool:
        return len(self.args) > 0

    def finish(self) -> None:
        if self.args:
            raise self.fail()


def parse_float_list(text: str, kind: str = "list") -> List[float]:
    args = SpecArgs(kind, text, [part.strip() for part in text.split(",") if part.strip()], "comma-separated numbers")
    return args.get_remaining_floats()


def parse_grid(text: str) -> Tuple[float, float, int]:
    """'tmin,tmax,n' for the --grid flag."""
    args = SpecArgs("grid", text, [part.strip() for part in text.split(",")], "tmin,tmax,n")
    t_min, t_max, n = args.get_float(), args.get_float(), args.get_int()
    args.finish()
    if not (0 < t_min < t_max) or n < 2:
        raise SpecFormatError("grid", text, "0 < tmin < tmax and n >= 2")
    return t_min, t_max, n


def _load_table(path: str, kind: str) -> np.ndarray:
    """Comma-separated numeric table, real when possible and complex otherwise."""
    if not os.path.isfile(path):
        raise SpecFormatError(kind, path, "an existing CSV file")
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
    except ValueError:
        pass
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2, comments="#", dtype=complex)
    except ValueError:
        raise SpecFormatError(kind, path, "a comma-separated numeric table")


def load_matrix(path: str) -> np.ndarray:
    table = _load_table(path, "matrix")
    if table.shape[0] != table.shape[1]:
        raise SpecFormatError("matrix", path, f"a square table, got shape {table.shape}")
    return table


def load_vectors(path: str) -> List[np.ndarray]:
    """One vector per row."""
    table = _load_table(path, "vectors")
    return [row.copy() for row in table]


def parse_vector(text: str) -> np.ndarray:
    """Inline 'x1,x2,...' or a CSV file holding one vector."""
    if os.path.isfile(text):
        table = _load_table(text, "vector")
        return table.ravel()
    return np.asarray(parse_float_list(text, "vector"))


def load_step_function(path: str, grid: LogGrid, kind: str = "function") -> SampledFunction:
    """
    Rows (t_k, v_k...) describe a step function equal to v_k on [t_k, t_{k+1}),
    0 before t_0 and v_last after the last row; it is sampled at the grid nodes.
    """
    table = _load_table(path, kind)
    if table.shape[1] < 2 or np.iscomplexobj(table):
        raise SpecFormatError(kind, path, "real rows t,value[,value...]")
    ts = table[:, 0]
    if np.any(ts <= 0) or np.any(np.diff(ts) <= 0):
        raise SpecFormatError(kind, path, "positive, strictly increasing t values")
    idx = np.searchsorted(ts, grid.nodes, side="right") - 1
    values = np.where((idx >= 0)[:, None], table[np.clip(idx, 0, None), 1:], 0.0)
    if values.shape[1] == 1:
        values = values[:, 0]
    return SampledFunction(grid, values)


def _load_weight(path: str) -> ExplicitWeight:
    """Two-column t,w samples, resampled log-log onto a log grid over their range."""
    table = _load_table(path, "weight")
    if table.shape[1] != 2 or table.shape[0] < 2 or np.iscomplexobj(table):
        raise SpecFormatError("weight", path, "two real columns t,w with at least two rows")
    ts, ws = table[:, 0], table[:, 1]
    if np.any(ts <= 0) or np.any(np.diff(ts) <= 0) or np.any(ws <= 0):
        raise SpecFormatError("weight", path, "positive increasing t and positive w")
    grid = LogGrid(float(ts[0]), float(ts[-1]), len(ts))
    values = np.exp(np.interp(np.log(grid.nodes), np.log(ts), np.log(ws)))
    return ExplicitWeight(SampledFunction(grid, values), source=path)


def parse_weight(text: str) -> Weight:
    kind, raw = parse_spec(text)
    args = SpecArgs("weight", text, raw, WEIGHT_HINT)
    try:
        if kind in ("one", "unit"):
            weight: Weight = UNIT_WEIGHT
        elif kind in ("pow", "power"):
            weight = Power(args.get_float())
        elif kind == "pp":
            weight = PiecewisePower(args.get_float(), args.get_float())
        elif kind == "file":
            return _load_weight(args.get_next())
        else:
            raise args.fail()
    except SpecFormatError:
        raise
    except ParameterError as error:
        raise SpecFormatError("weight", text, f"{WEIGHT_HINT} ({error})")
    args.finish()
    return weight


def parse_space(text: str) -> PhiSpace:
    base_text, _, weight_text = text.partition("@")
    kind, raw = parse_spec(base_text)
    args = SpecArgs("space", text, raw, SPACE_HINT)
    try:
        if kind == "lp":
            base = Lp(args.get_float())
        elif kind == "lorentz":
            base = Lorentz(args.get_float(), args.get_float())
        else:
            raise args.fail()
    except SpecFormatError:
        raise
    except ParameterError as error:
        raise SpecFormatError("space", text, f"{SPACE_HINT} ({error})")
    args.finish()
    weight = parse_weight(weight_text) if weight_text.strip() else UNIT_WEIGHT
    return PhiSpace(base, weight)


def parse_operator(text: str) -> SectorialOperator:
    kind, raw = parse_spec(text)
    args = SpecArgs("operator", text, raw, OPERATOR_HINT)
    from interplab.operators.sectorial import jordan_block, positive_diagonal, rotated_spectrum

    try:
        if kind == "diag":
            return positive_diagonal(args.get_remaining_floats())
        if kind == "jordan":
            operator = jordan_block(args.get_float())
        elif kind == "rotated":
            operator = rotated_spectrum(args.get_float())
        elif os.path.isfile(text):
            return SectorialOperator(load_matrix(text), os.path.basename(text))
        else:
            raise args.fail()
    except SpecFormatError:
        raise
    except ParameterError as error:
        raise SpecFormatError("operator", text, f"{OPERATOR_HINT} ({error})")
    args.finish()
    return operator


def parse_couple(text: str, grid: LogGrid) -> Couple:
    kind, raw = parse_spec(text)
    if kind == "domain":
        return DomainCouple(parse_operator(text.partition(":")[2]))
    args = SpecArgs("couple", text, raw, COUPLE_HINT)
    try:
        if kind == "trivial":
            couple: Couple = TrivialCouple(args.get_int())
        elif kind == "diag":
            return DiagonalCouple(args.get_remaining_floats())
        elif kind == "general":
            couple = FiniteDimCouple(args.get_int(), LpNorm(args.get_float()), LpNorm(args.get_float()))
        elif kind == "l1linf":
            couple = L1LinfCouple(grid)
        else:
            raise args.fail()
    except SpecFormatError:
        raise
    except ParameterError as error:
        raise SpecFormatError("couple", text, f"{COUPLE_HINT} ({error})")
    args.finish()
    return couple


def parse_function(text: str):
    from interplab.operators import sectorial

    kind, raw = parse_spec(text)
    args = SpecArgs("function", text, raw, FUNCTION_HINT)
    simple = {
        "e": sectorial.e_function,
        "psi-exp": sectorial.psi_exponential,
        "psi-res": sectorial.psi_resolvent,
        "resolvent": sectorial.resolvent_function,
        "one": sectorial.unit_function,
    }
    try:
        if kind in simple:
            f = simple[kind]()
        elif kind == "gamma":
            f = sectorial.gamma_function(args.get_float()) if args.has_next() else sectorial.gamma_function()
        elif kind == "mobius":
            f = sectorial.mobius_power(args.get_int())
        elif kind == "imag":
            f = sectorial.imaginary_power(args.get_float())
        else:
            raise args.fail()
    except SpecFormatError:
        raise
    except ParameterError as error:
        raise SpecFormatError("function", text, f"{FUNCTION_HINT} ({error})")
    args.finish()
    return f


def parse_forcing(text: str, grid: LogGrid, dim: int) -> SampledFunction:
    """Step-function right-hand sides on the grid."""
    kind, raw = parse_spec(text)
    args = SpecArgs("forcing", text, raw, FORCING_HINT)
    nodes = grid.nodes[:, None]
    if kind == "file":
        forcing = load_step_function(args.get_next(), grid, "forcing")
        if not forcing.is_vector:
            forcing = forcing.with_values(forcing.values[:, None])
        if forcing.dim != dim:
            raise SpecFormatError("forcing", text, f"{dim} value columns")
        return forcing
    if kind == "zero":
        args.finish()
        return SampledFunction.zeros(grid, dim)
    if kind == "const":
        profile = np.ones_like(nodes)
    elif kind == "step":
        profile = (nodes < args.get_float()).astype(float)
    elif kind == "power":
        gamma = args.get_float()
        profile = np.where(nodes < 1.0, nodes ** (-gamma), 0.0)
    else:
        raise args.fail()
    coefficients = np.asarray(args.get_remaining_floats())
    if len(coefficients) != dim:
        raise SpecFormatError("forcing", text, f"{dim} coefficients")
    return SampledFunction(grid, profile * coefficients[None, :])


def parse_contour(text: str):
    """'beta,rmin,rmax,npd' for the --contour flag."""
    from interplab.models.operator import Contour

    args = SpecArgs("contour", text, [part.strip() for part in text.split(",")], "beta,rmin,rmax,npd")
    beta, r_min, r_max, npd = args.get_float(), args.get_float(), args.get_float(), args.get_int()
    args.finish()
    try:
        return Contour(beta, r_min, r_max, npd)
    except ParameterError as error:
        raise SpecFormatError("contour", text, f"beta,rmin,rmax,npd ({error})")
