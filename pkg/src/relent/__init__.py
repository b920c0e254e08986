"""Relative entropy of entanglement for small bipartite states, with
GHZ/EPR balance audits for three-qubit pure states."""

from .analysis import (
    ContinuityInput,
    MregsReport,
    additivity_check,
    additivity_gap,
    continuity_bound,
    lambda_audit,
    lambda_prediction,
    mregs_balance,
    necessary_residual,
    two_copy_state,
)
from .entropy import (
    es_bc_closed_form,
    necnew_rhs,
    relative_entropy,
    s_ab_closed_form,
    s_bc_closed_form,
    von_neumann,
)
from .qlinalg import (
    DensityMatrix,
    DimensionError,
    EigenSystem,
    ValidationError,
    herm_eigensystem,
    is_ppt,
    log2_on_support,
    partial_trace,
    partial_transpose,
    tensor_product,
    trace_norm,
)
from .reeopt import (
    MixtureAnsatz,
    OptimizationResult,
    OptimizerConfig,
    lemma2_certificate,
    ree_constrained,
    ree_mixture,
    stationarity_inverse,
)
from .states import PureState, StateFamilyParams, epr, ghz, lambda_reduced, lambda_state, w_reduced, w_state
from .symmetry import (
    ConstrainedSigmaParams,
    SymmetryElement,
    SymmetryGroup,
    constrained_sigma,
    is_invariant,
    twirl,
    w_ab_symmetry_group,
)

__version__ = "0.1.0"
