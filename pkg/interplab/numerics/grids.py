"""
Grid construction, quadrature and the continuation of sampled functions
past the ends of their grid.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

from interplab.config import LabConfig
from interplab.models.exceptions import DomainError, ParameterError
from interplab.models.grid import CellModel, EdgeFit, LogGrid, SampledFunction

logger = logging.getLogger(__name__)

# virtual continuation cells are never finer than this
_MAX_VIRTUAL_CELLS_PER_DECADE = 50
# exponents this close to 0 count as "not decaying toward the end point"
_FLAT_EXPONENT = 1e-8


def build_log_grid(t_min: float, t_max: float, n: int) -> LogGrid:
    """
    Build a log-uniform grid.

    Args:
        t_min: first node, positive
        t_max: last node, larger than t_min
        n: node count, at least 2

    Raises:
        ParameterError: for degenerate bounds or too few nodes
    """
    return LogGrid(t_min, t_max, n)


def build_edge_grid(t_min: float, t_max: float, cells: int) -> LogGrid:
    """
    Build a grid whose cell edges are exactly geomspace(t_min, t_max, cells + 1).

    Indicators of intervals with end points among those edges are then
    represented without discretization error.
    """
    if not (0 < t_min < t_max):
        raise ParameterError(f"Edge grid needs 0 < t_min < t_max, got ({t_min}, {t_max})")
    if cells < 2:
        raise ParameterError(f"Edge grid needs at least 2 cells, got {cells}")
    half = (t_max / t_min) ** (0.5 / cells)
    return LogGrid(t_min * half, t_max / half, cells)


def default_grid() -> LogGrid:
    t_min, t_max, n = LabConfig.get_grid_spec()
    return LogGrid(t_min, t_max, n)


def integrate(f: SampledFunction, a: float, b: float) -> float:
    """
    Integrate the step-function model of f over [a, b].

    Each cell contributes its value times the length of its overlap with
    [a, b], which is the midpoint rule in log t with exact cell lengths.

    Raises:
        DomainError: if [a, b] is not inside [t_min, t_max]
        ParameterError: if a >= b or f is vector-valued
    """
    grid = f.grid
    tol = 1e-12
    if a >= b:
        raise ParameterError(f"Integration needs a < b, got ({a}, {b})")
    if a < grid.t_min * (1 - tol) or b > grid.t_max * (1 + tol):
        raise DomainError(f"[{a}, {b}] is outside the grid range [{grid.t_min}, {grid.t_max}]")
    if f.is_vector:
        raise ParameterError("integrate expects a scalar function")
    return float(_antiderivative(f, b) - _antiderivative(f, a))


def _antiderivative(f: SampledFunction, x: float):
    """Integral of the cell model from the first edge up to x (x inside the edge range)."""
    edges = f.grid.edges
    k = int(np.clip(np.searchsorted(edges, x, side="right") - 1, 0, f.grid.n - 1))
    full = np.sum(f.values[:k] * np.diff(edges[: k + 1]))
    return full + f.values[k] * (x - edges[k])


def cumulative_integral(f: SampledFunction, head: complex = 0.0) -> np.ndarray:
    """
    Integral from 0 up to every node, given the integral `head` over (0, edges[0]).

    Works for scalar and vector samples.
    """
    grid = f.grid
    values = f.values
    lengths = grid.cell_lengths
    if f.is_vector:
        lengths_b = lengths[:, None]
        half_b = (grid.nodes - grid.edges[:-1])[:, None]
    else:
        lengths_b = lengths
        half_b = grid.nodes - grid.edges[:-1]
    full_cells = np.cumsum(values * lengths_b, axis=0)
    before = np.concatenate([np.zeros_like(full_cells[:1]), full_cells[:-1]], axis=0)
    return head + before + values * half_b


def fit_edge(f: SampledFunction, at_start: bool) -> EdgeFit:
    """
    Fit the continuation of f beyond one end of its grid.

    Scalar real samples get a least-squares power law over the last decade
    of same-sign nonzero samples; an end sample of zero gives the zero
    continuation; vector and complex samples are continued constantly.
    """
    grid = f.grid
    anchor = grid.t_min if at_start else grid.t_max
    edge_value = f.values[0] if at_start else f.values[-1]
    if f.is_vector or f.is_complex:
        return EdgeFit(anchor, np.array(edge_value), 0.0)
    edge_value = float(edge_value)
    if edge_value == 0.0:
        return EdgeFit(anchor, np.array(0.0), 0.0)

    mask = grid.decade_mask(at_start)
    idx = np.flatnonzero(mask)
    if not at_start:
        idx = idx[::-1]
    run = []
    for i in idx:
        v = f.values[i]
        if v == 0.0 or np.sign(v) != np.sign(edge_value):
            break
        run.append(i)
    if len(run) < 2:
        return EdgeFit(anchor, np.array(edge_value), 0.0)

    run = np.array(sorted(run))
    log_t = np.log(grid.nodes[run] / anchor)
    log_v = np.log(np.abs(f.values[run]))
    slope, intercept = np.polyfit(log_t, log_v, 1)
    level = math.copysign(math.exp(intercept), edge_value)
    if abs(slope) < _FLAT_EXPONENT:
        slope = 0.0
    return EdgeFit(anchor, np.array(level), float(slope))


def head_integral(fit: EdgeFit, upper: float) -> np.ndarray:
    """
    Integral of the head continuation over (0, upper).

    Raises:
        DomainError: if the continuation is not integrable at 0
    """
    if fit.is_zero:
        return np.zeros_like(fit.level)
    gamma = fit.exponent
    if gamma <= -1.0:
        raise DomainError(f"Head continuation t^{gamma:.4g} is not integrable near 0")
    return fit.level * fit.anchor * (upper / fit.anchor) ** (gamma + 1.0) / (gamma + 1.0)


def tail_log_integral(fit: EdgeFit, lower: float) -> np.ndarray:
    """
    Integral of the tail continuation against ds/s over (lower, inf).

    Raises:
        DomainError: if the continuation does not decay
    """
    if fit.is_zero:
        return np.zeros_like(fit.level)
    gamma = fit.exponent
    if gamma >= 0.0:
        raise DomainError(f"Tail continuation s^{gamma:.4g} is not integrable against ds/s at infinity")
    return fit.level * (lower / fit.anchor) ** gamma / (-gamma)


def cell_model(f: SampledFunction, decades: Optional[float] = None,
               head: bool = True, tail: bool = True) -> CellModel:
    """
    Step-function model of a scalar f with its continuations.

    The head continuation covers `decades` decades below the first edge with
    virtual cells and is then carried down to 0 by its last level when that
    level does not decay toward 0. The tail continuation covers `decades`
    decades above the last edge; beyond it the model is 0.
    """
    if f.is_vector:
        raise ParameterError("cell_model expects a scalar function")
    grid = f.grid
    decades = LabConfig.TAIL_DECADES if decades is None else decades
    edges = grid.edges
    values = np.abs(f.values).astype(float) if f.is_complex else np.asarray(f.values, dtype=float)
    head_fit = fit_edge(SampledFunction(grid, values), at_start=True)
    tail_fit = fit_edge(SampledFunction(grid, values), at_start=False)

    per_decade = min(grid.nodes_per_decade, _MAX_VIRTUAL_CELLS_PER_DECADE)
    count = max(int(round(decades * per_decade)), 1)
    step = 10.0 ** (decades / count)

    parts_edges = []
    parts_values = []
    if head and not head_fit.is_zero:
        lower_edges = edges[0] / step ** np.arange(count, 0, -1)
        virtual_edges = np.concatenate((lower_edges, [edges[0]]))
        centers = np.sqrt(virtual_edges[:-1] * virtual_edges[1:])
        virtual_values = head_fit(centers)
        if head_fit.exponent <= _FLAT_EXPONENT:
            parts_edges.append(np.array([0.0]))
            parts_values.append(np.array([virtual_values[0]]))
        parts_edges.append(virtual_edges[:-1])
        parts_values.append(virtual_values)
    body_start = sum(len(v) for v in parts_values)
    parts_edges.append(edges[:-1])
    parts_values.append(values)
    body_stop = body_start + len(values)
    if tail and not tail_fit.is_zero:
        upper_edges = edges[-1] * step ** np.arange(0, count + 1)
        centers = np.sqrt(upper_edges[:-1] * upper_edges[1:])
        parts_edges.append(upper_edges[:-1])
        parts_values.append(tail_fit(centers))
        last_edge = upper_edges[-1]
    else:
        last_edge = edges[-1]
    all_edges = np.concatenate(parts_edges + [np.array([last_edge])])
    all_values = np.concatenate(parts_values)
    return CellModel(all_edges, all_values, slice(body_start, body_stop), head_fit, tail_fit)
