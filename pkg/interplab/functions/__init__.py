from .rearrangement import distribution_function, decreasing_rearrangement, cutoff_integrability
from .ri_norms import (
    FamilyMember,
    phi_norm,
    vector_phi_norm,
    boyd_test_family,
    dilation_norm,
    boyd_indices,
    cutoff_membership,
    min_inverse_function,
)
from .hardy import (
    apply_hardy,
    apply_adjoint,
    apply_calderon,
    duality_residual,
    analytic_norm,
    opnorm_lower,
    hardy_test_family,
    calderon_classification,
)
from .weight_classes import (
    mp_constant,
    m1_constant,
    m_upper_one_constant,
    mup_constant,
    apminus_constant,
    applus_constant,
    classify,
    probe_space_inclusion,
)


__all__ = [
    "distribution_function",
    "decreasing_rearrangement",
    "cutoff_integrability",
    "FamilyMember",
    "phi_norm",
    "vector_phi_norm",
    "boyd_test_family",
    "dilation_norm",
    "boyd_indices",
    "cutoff_membership",
    "min_inverse_function",
    "apply_hardy",
    "apply_adjoint",
    "apply_calderon",
    "duality_residual",
    "analytic_norm",
    "opnorm_lower",
    "hardy_test_family",
    "calderon_classification",
    "mp_constant",
    "m1_constant",
    "m_upper_one_constant",
    "mup_constant",
    "apminus_constant",
    "applus_constant",
    "classify",
    "probe_space_inclusion",
]
