"""Noise-agnostic maximum-likelihood amplitude estimation.

Simulates measurement records of amplified (Grover) and unamplified
companion circuits under per-depth oscillation damping, and recovers the
encoded amplitude angle with a one-dimensional profile likelihood built on
an analytic orthogonalization of the damping nuisance parameters.  Fisher
information and Cramer-Rao machinery plus an exact density-matrix circuit
oracle back the analytic model.
"""

__version__ = "0.1.0"

from orthoae.model import (
    Schedule,
    NoiseVector,
    DepolarizingSpec,
    grover_prob,
    ancillary_prob,
    depolarizing_beta,
)
from orthoae.ortho import (
    OrthoParams,
    OscillationFactors,
    oscillation_factors,
    beta_from_c,
    c_from_beta,
    beta_partials,
    BranchError,
    SingularityError,
)
from orthoae.sampling import (
    CountData,
    TrueModelSpec,
    sample_counts,
    expected_counts,
)
from orthoae.likelihood import (
    EstimationResult,
    EstimatorConfig,
    log_likelihood,
    ortho_log_likelihood,
    likelihood_scan,
    mle_estimate,
)
from orthoae.fisher import (
    FisherMatrix,
    fisher_matrix,
    fisher_orthogonalized,
    crlb_theta,
    classical_crlb,
    noiseless_crlb,
    query_count,
    DivergentInformationError,
    NonIdentifiableError,
)
from orthoae.circuit import (
    CircuitModel,
    DensityState,
    build_sum_circuit,
    random_circuit,
    evolve,
    hit_probability,
    verify_ancillary_identity,
)
from orthoae.experiment import (
    ExperimentConfig,
    TrialOutcome,
    ErrorCurve,
    ErrorCurveRow,
    run_trials,
    error_curve,
)

__all__ = [
    "Schedule",
    "NoiseVector",
    "DepolarizingSpec",
    "grover_prob",
    "ancillary_prob",
    "depolarizing_beta",
    "OrthoParams",
    "OscillationFactors",
    "oscillation_factors",
    "beta_from_c",
    "c_from_beta",
    "beta_partials",
    "BranchError",
    "SingularityError",
    "CountData",
    "TrueModelSpec",
    "sample_counts",
    "expected_counts",
    "EstimationResult",
    "EstimatorConfig",
    "log_likelihood",
    "ortho_log_likelihood",
    "likelihood_scan",
    "mle_estimate",
    "FisherMatrix",
    "fisher_matrix",
    "fisher_orthogonalized",
    "crlb_theta",
    "classical_crlb",
    "noiseless_crlb",
    "query_count",
    "DivergentInformationError",
    "NonIdentifiableError",
    "CircuitModel",
    "DensityState",
    "build_sum_circuit",
    "random_circuit",
    "evolve",
    "hit_probability",
    "verify_ancillary_identity",
    "ExperimentConfig",
    "TrialOutcome",
    "ErrorCurve",
    "ErrorCurveRow",
    "run_trials",
    "error_curve",
]
