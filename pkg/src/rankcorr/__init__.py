"""Rank correlations for continuous and discrete data with asymptotic inference."""
from .dgp import DgpSpec, calibrate_alpha, simulate
from .empirical import PairedSample, midranks, tie_probabilities
from .errors import (
    BoundaryValue,
    DegenerateDenominator,
    DegenerateMargin,
    DegenerateSample,
    InvalidLevel,
    InvalidSpec,
    LagTooLarge,
    RankCorrError,
    SampleTooLarge,
    TargetUnattainable,
    ZeroVariance,
)
from .estimators import (
    CoefficientId,
    estimate,
    goodman_kruskal_gamma,
    grade_correlation,
    kendall_tau,
    kendall_tau_b,
    pearson_r,
    spearman_rho,
    tau_b_mod,
)
from .independence import independence_variance
from .inference import analyze, coefficient_test, confidence_interval
from .study import StudySpec, run_study
from .variance import HacConfig, coefficient_variance

__version__ = "0.1.0"

__all__ = [
    "BoundaryValue",
    "CoefficientId",
    "DegenerateDenominator",
    "DegenerateMargin",
    "DegenerateSample",
    "DgpSpec",
    "HacConfig",
    "InvalidLevel",
    "InvalidSpec",
    "LagTooLarge",
    "PairedSample",
    "RankCorrError",
    "SampleTooLarge",
    "StudySpec",
    "TargetUnattainable",
    "ZeroVariance",
    "analyze",
    "calibrate_alpha",
    "coefficient_test",
    "coefficient_variance",
    "confidence_interval",
    "estimate",
    "goodman_kruskal_gamma",
    "grade_correlation",
    "independence_variance",
    "kendall_tau",
    "kendall_tau_b",
    "midranks",
    "pearson_r",
    "run_study",
    "simulate",
    "spearman_rho",
    "tau_b_mod",
    "tie_probabilities",
]
