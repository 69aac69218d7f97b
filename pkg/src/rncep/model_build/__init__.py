"""Model builders: each formulation becomes an explicit LinearProgram plus a VariableCatalog."""

from .aarc import aarc_sizes, build_aarc
from .catalog import CatalogError, VariableCatalog
from .flow import (
    ModelError,
    build_discrete_robust,
    build_evaluation_flow,
    build_nominal,
    build_stochastic_mean,
    column_count_discrete,
    intermediate_nodes,
)
from .policy import (
    AffinePolicy,
    aarc_outsourcing_bound,
    extract_affine_policy,
    extract_first_stage,
    family_coefficients,
    family_dual_lp,
    family_indices,
    outsourced_at,
    outsourcing_dual_lp,
    policy_vector,
    recourse_worst_case,
    relaxed_outsourcing_primal,
    worst_case_linear,
    worst_case_outsourcing,
    worst_case_outsourcing_oracle,
)

__all__ = [
    "AffinePolicy",
    "CatalogError",
    "ModelError",
    "VariableCatalog",
    "aarc_outsourcing_bound",
    "aarc_sizes",
    "build_aarc",
    "build_discrete_robust",
    "build_evaluation_flow",
    "build_nominal",
    "build_stochastic_mean",
    "column_count_discrete",
    "extract_affine_policy",
    "extract_first_stage",
    "family_coefficients",
    "family_dual_lp",
    "family_indices",
    "intermediate_nodes",
    "outsourced_at",
    "outsourcing_dual_lp",
    "policy_vector",
    "recourse_worst_case",
    "relaxed_outsourcing_primal",
    "worst_case_linear",
    "worst_case_outsourcing",
    "worst_case_outsourcing_oracle",
]
