"""Entanglement and Bell nonlocality toolkit for pure Fibonacci-anyon states.

The package computes the four entanglement measures of bipartite pure
anyonic states (entanglement entropy, relative entropy of entanglement,
charge entanglement, conventional entanglement), builds joint multi-copy
states and their per-copy measure series, and maximizes the CHSH Bell
combination over charge-graded local observables.  All values are
immutable and all operations are pure functions, so they are safe to
share across concurrent workers.
"""

from .bell import (
    TSIRELSON,
    CertificateRefusal,
    CHSHResult,
    LocalityCertificate,
    Observable,
    chsh_value,
    chsh_value_operator,
    expectation,
    expectation_operator,
    identity_observable,
    locality_certificate,
    optimize_chsh,
    random_involution_observable,
    rotation_observable,
    sign_observable,
    type_c_bound,
)
from .errors import (
    BlockMismatch,
    CopyLimitExceeded,
    DecompositionViolation,
    DimensionMismatch,
    DomainError,
    NormalizationError,
    NotAState,
    SupportViolation,
    TargetRankError,
    ValidationError,
)
from .measures import (
    MeasureReport,
    SeparableState,
    closest_separable_candidate,
    convex_mix,
    e_ace_pure,
    e_aree_pure,
    e_ce_pure,
    embed,
    measure_report,
    minimality_gradient,
    omega_project,
    omega_project_operator,
    pythagorean_residual,
    random_separable_direction,
    relative_entropy,
)
from .model import (
    CHARGE_ORDER,
    LOG2_PHI,
    PHI,
    PHI_EXACT,
    TOTAL_DIMENSION,
    Charge,
    QSqrt5,
    dual,
    fuse,
    fusion_space_dim,
    qdim,
    qdim_float,
    vacuum_bend_coefficient,
)
from .multicopy import (
    N_MAX,
    CopySeries,
    aee_additivity_check,
    copy_series,
    e_aree_ncopy,
    n_copy,
)
from .states import (
    GradedDensityOperator,
    SchmidtState,
    StateClass,
    aee,
    anyonic_entropy,
    classify,
    is_pure,
    new_schmidt_state,
    random_schmidt_state,
    reduced_density,
    shannon_entropy,
    state_from_dict,
    state_to_dict,
)
from .verify import CheckResult, run_suite

__version__ = "0.1.0"

__all__ = [
    "BlockMismatch",
    "CHARGE_ORDER",
    "CHSHResult",
    "CertificateRefusal",
    "Charge",
    "CheckResult",
    "CopyLimitExceeded",
    "CopySeries",
    "DecompositionViolation",
    "DimensionMismatch",
    "DomainError",
    "GradedDensityOperator",
    "LOG2_PHI",
    "LocalityCertificate",
    "MeasureReport",
    "N_MAX",
    "NormalizationError",
    "NotAState",
    "Observable",
    "PHI",
    "PHI_EXACT",
    "QSqrt5",
    "SchmidtState",
    "SeparableState",
    "StateClass",
    "SupportViolation",
    "TOTAL_DIMENSION",
    "TSIRELSON",
    "TargetRankError",
    "ValidationError",
    "aee",
    "aee_additivity_check",
    "anyonic_entropy",
    "chsh_value",
    "chsh_value_operator",
    "classify",
    "closest_separable_candidate",
    "convex_mix",
    "copy_series",
    "dual",
    "e_ace_pure",
    "e_aree_ncopy",
    "e_aree_pure",
    "e_ce_pure",
    "embed",
    "expectation",
    "expectation_operator",
    "fuse",
    "fusion_space_dim",
    "identity_observable",
    "is_pure",
    "locality_certificate",
    "measure_report",
    "minimality_gradient",
    "n_copy",
    "new_schmidt_state",
    "omega_project",
    "omega_project_operator",
    "optimize_chsh",
    "pythagorean_residual",
    "qdim",
    "qdim_float",
    "random_involution_observable",
    "random_schmidt_state",
    "random_separable_direction",
    "reduced_density",
    "relative_entropy",
    "rotation_observable",
    "run_suite",
    "shannon_entropy",
    "sign_observable",
    "state_from_dict",
    "state_to_dict",
    "type_c_bound",
    "vacuum_bend_coefficient",
]
