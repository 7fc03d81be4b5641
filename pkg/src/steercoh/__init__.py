"""Coherence, measurement-induced disturbance and steering-induced coherence
for finite-dimensional quantum states."""

from .correlations import (
    ComparabilityWarning,
    EigenbasisFamily,
    MidJointResult,
    MidResult,
    SearchBudget,
    SicResult,
    UnitaryPoint,
    avg_steered_coherence,
    b_side_mid,
    b_side_mid_detail,
    fourier_basis,
    mid,
    mid_detail,
    sic,
    verify_sic_properties,
    verify_theorem1,
)
from .measures import (
    DistanceKind,
    SupportViolationError,
    bloch_vector,
    coherence,
    distance,
    relative_entropy,
    verify_coherence_properties,
    verify_distance_properties,
)
from .protocols import (
    StateRecipe,
    bell_state,
    gap_example,
    incoherent_cnot,
    make_state,
    maximally_correlated,
    prepare_protocol_state,
    product_state,
    ree_numeric,
    rho_x_finding,
    rho_x_state,
    steering_induced_entanglement,
    verify_corollary1,
    verify_theorem2,
    werner_state,
)
from .qkernel import (
    DensityMatrix,
    InvalidStateError,
    KrausMap,
    ProjectiveBasis,
    SteeringEnsemble,
    SteeringOutcome,
    apply_kraus,
    dephase,
    eig_hermitian,
    entropy_of_probs,
    load_state,
    maximally_mixed,
    partial_trace,
    product_basis,
    regroup_dims,
    save_state,
    state_from_dict,
    state_to_dict,
    steer,
    tensor_product,
    von_neumann_entropy,
)
from .report import FAIL, FINDING, PASS, SKIP, VerificationReport
from .twoqubit import (
    DegenerateBlochError,
    PauliTheta,
    canonical_form,
    closed_form_sic_l1,
    diagonal_form,
    pauli_decompose,
    qubit_unitary_from_rotation,
    reconstruct,
    rotation_from_qubit_unitary,
    sic_l1_closed,
    verify_theorem3,
)

__all__ = [
    "ComparabilityWarning",
    "DegenerateBlochError",
    "DensityMatrix",
    "DistanceKind",
    "EigenbasisFamily",
    "FAIL",
    "FINDING",
    "InvalidStateError",
    "KrausMap",
    "MidJointResult",
    "MidResult",
    "PASS",
    "PauliTheta",
    "ProjectiveBasis",
    "SKIP",
    "SearchBudget",
    "SicResult",
    "StateRecipe",
    "SteeringEnsemble",
    "SteeringOutcome",
    "SupportViolationError",
    "UnitaryPoint",
    "VerificationReport",
    "apply_kraus",
    "avg_steered_coherence",
    "b_side_mid",
    "b_side_mid_detail",
    "bell_state",
    "bloch_vector",
    "canonical_form",
    "closed_form_sic_l1",
    "coherence",
    "dephase",
    "diagonal_form",
    "distance",
    "eig_hermitian",
    "entropy_of_probs",
    "fourier_basis",
    "gap_example",
    "incoherent_cnot",
    "load_state",
    "make_state",
    "maximally_correlated",
    "maximally_mixed",
    "mid",
    "mid_detail",
    "partial_trace",
    "pauli_decompose",
    "prepare_protocol_state",
    "product_basis",
    "product_state",
    "qubit_unitary_from_rotation",
    "reconstruct",
    "ree_numeric",
    "regroup_dims",
    "relative_entropy",
    "rho_x_finding",
    "rho_x_state",
    "rotation_from_qubit_unitary",
    "save_state",
    "sic",
    "sic_l1_closed",
    "state_from_dict",
    "state_to_dict",
    "steer",
    "steering_induced_entanglement",
    "tensor_product",
    "verify_corollary1",
    "verify_coherence_properties",
    "verify_distance_properties",
    "verify_sic_properties",
    "verify_theorem1",
    "verify_theorem2",
    "verify_theorem3",
    "von_neumann_entropy",
]

__version__ = "0.1.0"
