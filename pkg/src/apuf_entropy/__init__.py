"""Closed-form response similarity, optimal prediction and conditional entropy for arbiter PUFs."""
from .bins import (
    BinSpec,
    FirstBitCase,
    InfeasibleCellError,
    NeighborhoodCell,
    UnrealizableError,
    anchors_for_profile,
    bin_size_1,
    cell_count,
    cell_of,
    construct_third,
    enumerate_bin,
    enumerate_bin_1,
    enumerate_neighborhood_2,
    feasible_region,
    profile_for_rho,
    semimetric_to_factors,
)
from .correlation import (
    CorrelationTriple,
    MatchProfile,
    SimilarityFactor,
    correlation_triple,
    keep_count,
    match_profile,
    orthant2,
    orthant3,
    pair_correlation,
    response_similarity,
    similarity_factor,
)
from .entropy import EntropyReport, binary_entropy, cond_entropy_1, cond_entropy_2
from .expected import expected_report_1, expected_report_2
from .mc import McConfig, McResult, mc_conditional, mc_predictor_accuracy, mc_response_similarity
from .model import (
    Challenge,
    DimensionError,
    PhiVector,
    PufInstance,
    StageDelays,
    challenge_to_phi,
    eval_linear,
    eval_recursive,
    phi_to_challenge,
    sample_instance,
)
from .prediction import (
    Crp,
    DegenerateEvidenceError,
    Prediction,
    cond_pmf_1,
    cond_pmf_2,
    pmf_two,
    predict_1,
    predict_2,
)

__all__ = [
    "BinSpec",
    "FirstBitCase",
    "InfeasibleCellError",
    "NeighborhoodCell",
    "UnrealizableError",
    "anchors_for_profile",
    "bin_size_1",
    "cell_count",
    "cell_of",
    "construct_third",
    "enumerate_bin",
    "enumerate_bin_1",
    "enumerate_neighborhood_2",
    "feasible_region",
    "profile_for_rho",
    "semimetric_to_factors",
    "CorrelationTriple",
    "MatchProfile",
    "SimilarityFactor",
    "correlation_triple",
    "keep_count",
    "match_profile",
    "orthant2",
    "orthant3",
    "pair_correlation",
    "response_similarity",
    "similarity_factor",
    "EntropyReport",
    "binary_entropy",
    "cond_entropy_1",
    "cond_entropy_2",
    "expected_report_1",
    "expected_report_2",
    "McConfig",
    "McResult",
    "mc_conditional",
    "mc_predictor_accuracy",
    "mc_response_similarity",
    "Challenge",
    "DimensionError",
    "PhiVector",
    "PufInstance",
    "StageDelays",
    "challenge_to_phi",
    "eval_linear",
    "eval_recursive",
    "phi_to_challenge",
    "sample_instance",
    "Crp",
    "DegenerateEvidenceError",
    "Prediction",
    "cond_pmf_1",
    "cond_pmf_2",
    "pmf_two",
    "predict_1",
    "predict_2",
]

__version__ = "0.1.0"
