from .grids import (
    build_log_grid,
    build_edge_grid,
    default_grid,
    integrate,
    cumulative_integral,
    fit_edge,
    head_integral,
    tail_log_integral,
    cell_model,
)
from .linalg import (
    as_matrix,
    mat_exp,
    exp_by_eigen,
    function_by_eigen,
    solve_resolvent,
    solve_shifted,
    is_invertible,
    step_matrices,
)


__all__ = [
    "build_log_grid",
    "build_edge_grid",
    "default_grid",
    "integrate",
    "cumulative_integral",
    "fit_edge",
    "head_integral",
    "tail_log_integral",
    "cell_model",
    "as_matrix",
    "mat_exp",
    "exp_by_eigen",
    "function_by_eigen",
    "solve_resolvent",
    "solve_shifted",
    "is_invertible",
    "step_matrices",
]
