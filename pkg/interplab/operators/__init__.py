from .couples import (
    Decomposition,
    TraceFunction,
    decompose,
    k_functional,
    optimal_decomposition,
    sum_norm,
    intersection_norm,
    k_curve,
    k_method_norm,
    embedding_bracket,
    trace_construction,
    trace_method_norm,
    operator_interp_check,
)
from .sectorial import (
    sector_profile,
    default_contour,
    calc_h0,
    calc_e,
    calc_hinf,
    apply_function,
    psi_rep_norm,
    semigroup_rep_norm,
    quasi_linear_decomposition,
    psi_admissibility,
    interp_norm_report,
    dore_ratio,
)
from .maxreg import solve_cauchy, mr_seminorms, split_solve, mr_constant_estimate


__all__ = [
    "Decomposition",
    "TraceFunction",
    "decompose",
    "k_functional",
    "optimal_decomposition",
    "sum_norm",
    "intersection_norm",
    "k_curve",
    "k_method_norm",
    "embedding_bracket",
    "trace_construction",
    "trace_method_norm",
    "operator_interp_check",
    "sector_profile",
    "default_contour",
    "calc_h0",
    "calc_e",
    "calc_hinf",
    "apply_function",
    "psi_rep_norm",
    "semigroup_rep_norm",
    "quasi_linear_decomposition",
    "psi_admissibility",
    "interp_norm_report",
    "dore_ratio",
    "solve_cauchy",
    "mr_seminorms",
    "split_solve",
    "mr_constant_estimate",
]
