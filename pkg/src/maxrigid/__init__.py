"""Maximal rigidity of stationary random fields: spectral tools and desk-scale experiments.

The package evaluates second-order quantities of stationary fields on
``R^d`` and ``Z^d`` from their spectral measure, builds best linear
predictors from observations outside a region, and implements the
constructions that certify (or refute) perfect interpolation.
"""

from .exceptions import (
    ApproximantFailure,
    BudgetExceeded,
    ClusteredZeros,
    ConfigError,
    EmbeddingNotPSD,
    Inconclusive,
    MaxRigidError,
    NoCertificate,
    QuadratureDivergence,
    SingularGram,
)
from .functionals import Ball, Cell, DomainTag, PointMass, WeightedSum, fourier_of_functional
from .quadrature import QuadratureSpec
from .spectral import (
    CovarianceKernel,
    SpectralMeasure,
    check_symmetry,
    check_tempered,
    covariance_eval,
    spectral_gap_search,
    spectral_inner,
    tensor_domination_check,
    variance_of_statistic,
)
from .szego import SzegoVerdict, log_integral_verdict
from .design import ObservationDesign, grid_design
from .predictor import BestLinearPredictor, PredictionResult, interpolation_error_sweep, solve_predictor
from .orthant import OrthantApproximator, en_curve, orthant_error_en, strong_interpolability_check

__version__ = "0.1.0"

__all__ = [
    "ApproximantFailure",
    "BudgetExceeded",
    "ClusteredZeros",
    "ConfigError",
    "EmbeddingNotPSD",
    "Inconclusive",
    "MaxRigidError",
    "NoCertificate",
    "QuadratureDivergence",
    "SingularGram",
    "Ball",
    "Cell",
    "DomainTag",
    "PointMass",
    "WeightedSum",
    "fourier_of_functional",
    "QuadratureSpec",
    "CovarianceKernel",
    "SpectralMeasure",
    "check_symmetry",
    "check_tempered",
    "covariance_eval",
    "spectral_gap_search",
    "spectral_inner",
    "tensor_domination_check",
    "variance_of_statistic",
    "SzegoVerdict",
    "log_integral_verdict",
    "ObservationDesign",
    "grid_design",
    "BestLinearPredictor",
    "PredictionResult",
    "interpolation_error_sweep",
    "solve_predictor",
    "OrthantApproximator",
    "en_curve",
    "orthant_error_en",
    "strong_interpolability_check",
]
