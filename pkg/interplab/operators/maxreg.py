"""
Exact solution of u' + Au = f, u(0) = x0 for step-function forcing, and
the maximal-regularity quantities of the solution in E_w norms.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from interplab.functions.ri_norms import vector_phi_norm
from interplab.models.couple import DomainCouple, LpNorm
from interplab.models.exceptions import ParameterError, SolverError
from interplab.models.grid import LogGrid, SampledFunction
from interplab.models.operator import SectorialOperator
from interplab.models.problem import CauchyProblem, MRReport
from interplab.models.spaces import PhiSpace
from interplab.numerics.linalg import step_matrices

logger = logging.getLogger(__name__)

# relative residual above which a solve is rejected
_RESIDUAL_LIMIT = 1e-8


@dataclass
class CauchySolution:
    u: SampledFunction
    du: SampledFunction
    residual: float


def _knots(grid: LogGrid) -> np.ndarray:
    """0, e_0, t_0, e_1, t_1, ..., e_{n-1}, t_{n-1}: the half-cell boundaries."""
    edges = grid.edges[:-1]
    knots = np.empty(2 * grid.n + 1)
    knots[0] = 0.0
    knots[1::2] = edges
    knots[2::2] = grid.nodes
    return knots


def solve_cauchy(problem: CauchyProblem) -> CauchySolution:
    """
    Step the solution exactly over (0, e_0) and every half cell.

    On a half cell of length h with constant forcing f_i,
    u <- E u + W0 f_i with E = e^{-hA}, W0 = int_0^h e^{-sA} ds; the
    derivative at the node is e^{-hA}(f_i - A u(e_i)).

    Raises:
        SolverError: if u' + Au - f at the nodes exceeds the residual limit
    """
    started = time.perf_counter()
    a = problem.operator.matrix
    grid = problem.grid
    f = problem.forcing.values
    knots = _knots(grid)
    u = np.empty((grid.n, problem.dim), dtype=problem.dtype)
    du = np.empty_like(u)
    state = problem.x0.astype(problem.dtype)
    for i in range(grid.n):
        # head (0, e_0) carries the first forcing sample
        if i == 0:
            e, w0, _ = step_matrices(a, knots[1])
            state = e @ state + w0 @ f[0]
        at_edge = state
        e, w0, _ = step_matrices(a, knots[2 * i + 2] - knots[2 * i + 1])
        state = e @ at_edge + w0 @ f[i]
        u[i] = state
        du[i] = e @ (f[i] - a @ at_edge)
        if i + 1 < grid.n:
            e, w0, _ = step_matrices(a, knots[2 * i + 3] - knots[2 * i + 2])
            state = e @ state + w0 @ f[i]

    residual_rows = np.abs(du + u @ a.T - f).max(axis=1)
    scale = 1.0 + np.abs(f).max(initial=0.0) + np.abs(u @ a.T).max(initial=0.0)
    residual = float(residual_rows.max() / scale)
    if residual > _RESIDUAL_LIMIT:
        raise SolverError(f"Residual {residual:.3e} of u' + Au = f exceeds {_RESIDUAL_LIMIT:g}")
    logger.info("solved %d-dimensional Cauchy problem on %d nodes in %.2fs", problem.dim, grid.n,
                time.perf_counter() - started)
    return CauchySolution(SampledFunction(grid, u), SampledFunction(grid, du), residual)


def mr_seminorms(solution: CauchySolution, problem: CauchyProblem, space: PhiSpace,
                 horizon: Optional[float] = None, norm: Optional[LpNorm] = None,
                 x0_norm: float = 0.0) -> MRReport:
    """
    E_w norms of |u'|_X, |Au|_X and |f|_X on (0, horizon].

    The head below t_min comes from the continuation of the samples.
    """
    norm = norm or LpNorm(1.0)
    grid = problem.grid
    horizon = grid.t_max if horizon is None else horizon
    if not horizon > grid.t_min:
        raise ParameterError(f"Horizon must exceed t_min = {grid.t_min}, got {horizon}")
    au = solution.u.with_values(solution.u.values @ problem.operator.matrix.T)
    measured = {}
    for name, values in (("du", solution.du), ("au", au), ("f", problem.forcing)):
        measured[name] = vector_phi_norm(space, values.restricted(horizon), norm)
    return MRReport(
        measured["du"].value,
        measured["au"].value,
        measured["f"].value,
        x0_norm,
        solution.residual,
        horizon,
        {name: estimate.tail_bound for name, estimate in measured.items()},
    )


@dataclass
class SplitSolution:
    """u = w + z with w piecewise linear through a trace of x0 and z(0) = 0."""

    u: SampledFunction
    w: SampledFunction
    z: SampledFunction


def split_solve(problem: CauchyProblem, space: PhiSpace, norm: Optional[LpNorm] = None) -> SplitSolution:
    """
    Solve through the splitting u = w + z, where w interpolates the trace
    of x0 on (X, dom A) linearly between half-cell boundaries (w(0) = x0)
    and z' + Az = f - w' - Aw, z(0) = 0, is stepped exactly for the linear
    forcing of every half cell.
    """
    from interplab.operators.couples import trace_construction

    a = problem.operator.matrix
    grid = problem.grid
    knots = _knots(grid)
    dim = problem.dim
    if np.any(problem.x0):
        couple = DomainCouple(problem.operator, norm or LpNorm(1.0))
        trace = trace_construction(couple, space, problem.x0, grid)
        anchors = np.array([problem.x0] + [trace.value_at(float(t)) for t in knots[1:]], dtype=problem.dtype)
    else:
        anchors = np.zeros((len(knots), dim), dtype=problem.dtype)

    f = problem.forcing.values
    z = np.zeros(dim, dtype=problem.dtype)
    z_nodes = np.empty((grid.n, dim), dtype=problem.dtype)
    for k in range(len(knots) - 1):
        h = knots[k + 1] - knots[k]
        i = max((k - 1) // 2, 0)
        slope = (anchors[k + 1] - anchors[k]) / h
        g0 = f[i] - slope - a @ anchors[k]
        g1 = -(a @ slope)
        e, w0, w1 = step_matrices(a, h)
        z = e @ z + w0 @ g0 + w1 @ g1
        if k % 2 == 1:
            z_nodes[(k - 1) // 2] = z
    w_nodes = anchors[2::2]
    return SplitSolution(SampledFunction(grid, w_nodes + z_nodes), SampledFunction(grid, w_nodes),
                         SampledFunction(grid, z_nodes))


@dataclass
class MRConstantEstimate:
    """sup over a family of (|u'| + |Au|) / (|f| + |x0|_interp)."""

    value: float
    reports: List[MRReport] = field(default_factory=list)
    split_agreement: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "ratios": [report.ratio for report in self.reports],
            "split_agreement": self.split_agreement,
            "reports": [report.to_dict() for report in self.reports],
        }


def mr_constant_estimate(operator: SectorialOperator, space: PhiSpace,
                         family: Sequence[Tuple[SampledFunction, np.ndarray]],
                         horizon: Optional[float] = None, norm: Optional[LpNorm] = None,
                         check_split: bool = True) -> MRConstantEstimate:
    """
    Largest maximal-regularity ratio over a family of (f, x0).

    The interpolation norm of x0 is its K-method norm on (X, dom A)_Phi.
    With check_split, problems with x0 != 0 are also solved through
    split_solve and the largest relative disagreement is recorded.

    Raises:
        ParameterError: for an empty family
    """
    from interplab.operators.couples import k_method_norm

    if not family:
        raise ParameterError("mr_constant_estimate needs a nonempty family of (f, x0)")
    norm = norm or LpNorm(1.0)
    couple = DomainCouple(operator, norm)
    estimate = MRConstantEstimate(0.0)
    for forcing, x0 in family:
        problem = CauchyProblem(operator, forcing, x0)
        solution = solve_cauchy(problem)
        x0_norm = k_method_norm(couple, space, problem.x0, forcing.grid).value if np.any(problem.x0) else 0.0
        report = mr_seminorms(solution, problem, space, horizon, norm, x0_norm)
        estimate.reports.append(report)
        estimate.value = max(estimate.value, report.ratio)
        if check_split and np.any(problem.x0):
            split = split_solve(problem, space, norm)
            scale = 1.0 + np.abs(solution.u.values).max()
            gap = float(np.abs(split.u.values - solution.u.values).max() / scale)
            estimate.split_agreement = max(estimate.split_agreement, gap)
    if not math.isfinite(estimate.value):
        logger.warning("maximal-regularity ratio is not finite")
    return estimate
