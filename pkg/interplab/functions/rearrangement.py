"""
Weighted distribution functions and decreasing rearrangements.

Every sampled function is read through its cell model, so superlevel sets
are unions of cells and their w-measure is a sum of exact cell masses.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from interplab.models.exceptions import ParameterError, RearrangementUndefinedError
from interplab.models.grid import CellModel, SampledFunction
from interplab.models.spaces import RearrangementResult
from interplab.models.weight import Weight
from interplab.numerics.grids import cell_model

logger = logging.getLogger(__name__)


def _scalar_model(f: SampledFunction, extend: bool) -> CellModel:
    if f.is_vector:
        raise ParameterError("Expected a scalar function; reduce vector samples with a pointwise norm first")
    model = cell_model(f)
    return model if extend else model.body_only()


def _cell_masses(model: CellModel, w: Weight) -> Tuple[np.ndarray, np.ndarray]:
    levels = np.abs(model.values)
    masses = np.asarray(w.mass(model.lefts, model.rights), dtype=float)
    return levels, masses


def distribution_function(f: SampledFunction, w: Weight, level: float, extend: bool = False) -> float:
    """
    w-measure of {|f| > level}.

    Returns inf when the superlevel set has infinite w-measure.

    Raises:
        ParameterError: if level <= 0
    """
    if not level > 0:
        raise ParameterError(f"Distribution function needs a positive level, got {level}")
    levels, masses = _cell_masses(_scalar_model(f, extend), w)
    above = levels > level
    return float(np.sum(masses[above])) if np.any(above) else 0.0


def decreasing_rearrangement(f: SampledFunction, w: Weight, extend: bool = False,
                             model: Optional[CellModel] = None) -> RearrangementResult:
    """
    Decreasing rearrangement of |f| with respect to w dt.

    Cells are sorted by |value| descending, equal values merge into a single
    step and the w-masses accumulate into the breakpoints.

    Args:
        f: scalar samples
        w: the weight
        extend: include the power-law continuation of f past its grid (f is 0 there otherwise)
        model: precomputed cell model (overrides f and extend)

    Raises:
        RearrangementUndefinedError: if a positive level has infinite w-measure
    """
    if model is None:
        model = _scalar_model(f, extend)
    levels, masses = _cell_masses(model, w)
    positive = levels > 0
    if not np.any(positive):
        return RearrangementResult.empty()
    levels = levels[positive]
    masses = masses[positive]

    unique_levels, inverse = np.unique(-levels, return_inverse=True)
    merged = np.bincount(inverse, weights=masses, minlength=len(unique_levels))
    descending = -unique_levels
    infinite = ~np.isfinite(merged)
    if np.any(infinite):
        level = float(descending[infinite][0])
        raise RearrangementUndefinedError(level)
    keep = merged > 0
    breakpoints = np.concatenate(([0.0], np.cumsum(merged[keep])))
    logger.debug("rearranged %d cells into %d steps", len(levels), int(np.sum(keep)))
    return RearrangementResult(breakpoints, descending[keep])


def cutoff_integrability(w: Weight) -> Tuple[bool, Optional[float]]:
    """
    Whether w is integrable near 0, with the value of its integral over (0, 1).

    Returns:
        (True, value) or (False, None)
    """
    value = float(w.mass(0.0, 1.0))
    if not np.isfinite(value):
        return False, None
    return True, value
