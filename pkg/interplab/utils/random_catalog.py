import math
from typing import Generator, Optional, Tuple

import numpy as np

from interplab.config import LabConfig
from interplab.models.grid import LogGrid, SampledFunction

# stream offsets so that catalogs never share draws
STEP_FUNCTIONS_STREAM = 1
VECTORS_STREAM = 2
DIAGONAL_STREAM = 3
FORCING_STREAM = 4


def random_step_function(grid: LogGrid, rng: np.random.Generator, steps: int = 8,
                         nonnegative: bool = False) -> SampledFunction:
    """
    A step function on the grid with breakpoints log-uniform inside it.

    The last step is zero, so the function vanishes near t_max.
    """
    breaks = np.sort(np.exp(rng.uniform(math.log(grid.t_min), math.log(grid.t_max), steps)))
    levels = rng.uniform(0.1, 5.0, steps) if nonnegative else rng.uniform(-5.0, 5.0, steps)
    levels[-1] = 0.0
    idx = np.searchsorted(breaks, grid.nodes, side="right")
    values = np.where(idx < steps, levels[np.clip(idx, 0, steps - 1)], 0.0)
    return SampledFunction(grid, values)


def generate_step_functions(grid: LogGrid, count: int = 10, steps: int = 8, nonnegative: bool = False,
                            rng: Optional[np.random.Generator] = None) -> Generator[SampledFunction, None, None]:
    """
    Generate seeded random step functions.

    Args:
        grid: grid the functions are sampled on
        count: number of functions to generate
        steps: number of levels per function
        nonnegative: draw positive levels only
        rng: generator to draw from; derived from the run seed when None

    Yields:
        A SampledFunction constant between random breakpoints.
    """
    rng = rng or LabConfig.make_rng(STEP_FUNCTIONS_STREAM)
    for _ in range(count):
        yield random_step_function(grid, rng, steps, nonnegative)


def generate_vectors(dim: int, count: int = 10, unit: bool = True,
                     rng: Optional[np.random.Generator] = None) -> Generator[np.ndarray, None, None]:
    """
    Generate seeded Gaussian vectors, normalized to unit l2 length when unit is set.

    Yields:
        A real vector of length dim.
    """
    rng = rng or LabConfig.make_rng(VECTORS_STREAM)
    for _ in range(count):
        v = rng.standard_normal(dim)
        yield v / np.linalg.norm(v) if unit else v


def generate_diagonal_instances(count: int = 10, dim: int = 2, decades: float = 2.0,
                                rng: Optional[np.random.Generator] = None
                                ) -> Generator[Tuple[np.ndarray, np.ndarray], None, None]:
    """
    Generate (mu, x) pairs for diagonal couples.

    mu is log-uniform in [10^-decades, 10^decades] and x is a nonzero
    Gaussian vector.
    """
    rng = rng or LabConfig.make_rng(DIAGONAL_STREAM)
    for _ in range(count):
        mu = 10.0 ** rng.uniform(-decades, decades, dim)
        x = rng.standard_normal(dim)
        yield mu, x


def generate_forcing_family(grid: LogGrid, dim: int, count: int = 6, with_initial_values: bool = False,
                            rng: Optional[np.random.Generator] = None
                            ) -> Generator[Tuple[SampledFunction, np.ndarray], None, None]:
    """
    Generate right-hand sides for u' + Au = f.

    Cycles through indicator steps chi_(0,a), decaying powers
    t^-gamma chi_(0,1) with gamma in (0, 1/2) and random cell values on
    (0, 1), each multiplied by a random direction.

    Yields:
        (forcing, x0) with x0 = 0 unless with_initial_values is set.
    """
    rng = rng or LabConfig.make_rng(FORCING_STREAM)
    nodes = grid.nodes
    for i in range(count):
        direction = rng.standard_normal(dim)
        kind = i % 3
        if kind == 0:
            cut = 10.0 ** rng.uniform(-2.0, 1.0)
            profile = (nodes < cut).astype(float)
        elif kind == 1:
            gamma = rng.uniform(0.05, 0.45)
            profile = np.where(nodes < 1.0, nodes ** (-gamma), 0.0)
        else:
            profile = np.where(nodes < 1.0, rng.uniform(0.0, 2.0, grid.n), 0.0)
        forcing = SampledFunction(grid, profile[:, None] * direction[None, :])
        x0 = rng.standard_normal(dim) if with_initial_values else np.zeros(dim)
        yield forcing, x0
