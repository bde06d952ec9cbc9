"""
Configuration module for interplab.

Holds the run seed, the default time grid and the numerical policy
constants shared by every module.
"""

import os
from typing import Tuple

import numpy as np

SEED_ENV = "INTERPLAB_SEED"
LOG_LEVEL_ENV = "INTERPLAB_LOG_LEVEL"
DEFAULT_SEED = 42


def _detect_default_seed() -> int:
    """
    Detect the default seed from the environment.

    Returns:
        Value of INTERPLAB_SEED when set, 42 otherwise

    Raises:
        ValueError: if INTERPLAB_SEED is set but is not a nonnegative integer
    """
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        seed = int(raw)
    except ValueError:
        raise ValueError(f"Invalid {SEED_ENV}: {raw!r}. Must be a nonnegative integer")
    if seed < 0:
        raise ValueError(f"Invalid {SEED_ENV}: {raw!r}. Must be a nonnegative integer")
    return seed


class LabConfig:
    """
    Run configuration and numerical policy.

    The seed and the grid are per-run settings (the CLI overrides them);
    the remaining class attributes are policy constants that modules read
    directly.
    """

    _seed = _detect_default_seed()
    _grid_spec: Tuple[float, float, int] = (1e-6, 1e6, 4800)

    # extension of sampled functions beyond the grid
    TAIL_DECADES = 6
    TAIL_BOUND_TOLERANCE = 0.01

    # linear algebra
    PIVOT_THRESHOLD = 1e-13
    EIGEN_CONDITION_LIMIT = 1e6

    # contour quadrature
    CONTOUR_NODES_PER_DECADE = 40
    CONTOUR_DECADES = 6
    CONTOUR_MAX_DECADES = 40
    CALCULUS_TOLERANCE = 1e-10

    # weight-class sweeps
    DIVERGENCE_FACTOR = 10.0
    DIVERGENCE_DECADES = 3
    SWEEP_DECADES = 8
    SWEEP_SAMPLES_PER_DECADE = 20

    # K-functional optimisation
    K_RESTARTS = 5
    K_MAX_DIM = 8
    K_GAP_TOLERANCE = 1e-3
    K_NODES_PER_DECADE = 16

    # trace construction
    TRACE_THINNING_RATIO = 2.0
    TRACE_MAX_DEPTH = 10 ** 6
    TRACE_INITIAL_TOLERANCE = 1e-2

    # semigroup sweeps
    SEMIGROUP_BOUND = 1e6

    @classmethod
    def set_seed(cls, seed: int) -> None:
        """
        Set the run seed.

        Args:
            seed: nonnegative integer

        Raises:
            ValueError: if seed is negative or not an integer
        """
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
            raise ValueError(f"Invalid seed: {seed!r}. Must be a nonnegative integer")
        cls._seed = int(seed)

    @classmethod
    def get_seed(cls) -> int:
        """
        Get the run seed.

        Returns:
            Current seed
        """
        return cls._seed

    @classmethod
    def make_rng(cls, offset: int = 0) -> np.random.Generator:
        """
        Create a random generator derived from the run seed.

        Args:
            offset: stream offset so that independent catalogs do not share draws

        Returns:
            numpy Generator seeded with (seed, offset)
        """
        return np.random.default_rng([cls._seed, offset])

    @classmethod
    def set_grid_spec(cls, t_min: float, t_max: float, n: int) -> None:
        """
        Set the default grid used when an operation is not given one.

        Raises:
            ValueError: if the bounds or the node count are invalid
        """
        if not (0 < t_min < t_max) or n < 2:
            raise ValueError(f"Invalid grid: ({t_min}, {t_max}, {n}). Need 0 < t_min < t_max and n >= 2")
        cls._grid_spec = (float(t_min), float(t_max), int(n))

    @classmethod
    def get_grid_spec(cls) -> Tuple[float, float, int]:
        """
        Get the default grid bounds and node count.

        Returns:
            Tuple of (t_min, t_max, n)
        """
        return cls._grid_spec

    @classmethod
    def get_log_level(cls) -> str:
        """
        Get the log level requested through the environment.

        Returns:
            Level name, WARNING when unset
        """
        return os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
