"""HodgeRank on clique complexes, plus a matrix-level simulator of its
quantum counterpart (singular-value-transform pseudoinverse filtering,
postselection accounting, and sampling-based readout procedures)."""

from .complexes import (
    Graph,
    OrientedSimplex,
    CliqueComplex,
    BoundaryMatrix,
    build_clique_complex,
    boundary_matrix,
    hodge_laplacian,
    hodge_projectors,
    betti_number,
    read_edge_list,
)
from .ranking import (
    PairwiseData,
    SimplicialSignal,
    RankResult,
    assemble_edge_signal,
    hodgerank_solve,
    solve_scores,
    consistency_measures,
    effective_condition_params,
    read_pairwise_csv,
)
from .filters import (
    InversePolynomial,
    FilterSpec,
    FilterConstructionError,
    FilterParityError,
    build_inverse_poly,
    pseudoinverse_filter,
    projector_filter,
    identity_filter,
    apply_filter_sv,
)
from .qtsp import (
    PostselectionError,
    CertificationError,
    QuantumSignalState,
    FilterOutcome,
    DiracEncoding,
    CostReport,
    prepare_signal_state,
    qtsp_apply,
    quantum_hodgerank,
    dirac_encoding,
    cost_model,
)
from .sampling import (
    EstimatorConfig,
    EstimateReport,
    hadamard_test_sample,
    estimate_consistency,
    relative_ranking,
    tomography_ranking,
)
from .model import HodgeRankEstimator, QuantumHodgeRankEstimator

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "OrientedSimplex",
    "CliqueComplex",
    "BoundaryMatrix",
    "build_clique_complex",
    "boundary_matrix",
    "hodge_laplacian",
    "hodge_projectors",
    "betti_number",
    "read_edge_list",
    "PairwiseData",
    "SimplicialSignal",
    "RankResult",
    "assemble_edge_signal",
    "hodgerank_solve",
    "solve_scores",
    "consistency_measures",
    "effective_condition_params",
    "read_pairwise_csv",
    "InversePolynomial",
    "FilterSpec",
    "FilterConstructionError",
    "FilterParityError",
    "build_inverse_poly",
    "pseudoinverse_filter",
    "projector_filter",
    "identity_filter",
    "apply_filter_sv",
    "PostselectionError",
    "CertificationError",
    "QuantumSignalState",
    "FilterOutcome",
    "DiracEncoding",
    "CostReport",
    "prepare_signal_state",
    "qtsp_apply",
    "quantum_hodgerank",
    "dirac_encoding",
    "cost_model",
    "EstimatorConfig",
    "EstimateReport",
    "hadamard_test_sample",
    "estimate_consistency",
    "relative_ranking",
    "tomography_ranking",
    "HodgeRankEstimator",
    "QuantumHodgeRankEstimator",
]
