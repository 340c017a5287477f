"""Rigidity constructions: gap polynomials, minor cones, zero densities, periodicity, patching."""

from .cones import ConeSpec, has_antipodal_pair, is_pointed, minor_cone_witness
from .gap_polynomial import (
    GapPolynomial,
    PowerBound,
    SupportSample,
    arc_complement_sample,
    build_gap_polynomial,
    certify,
    counterexample_set,
    power_error_bound,
    sample_set,
    tensor_gap_polynomial,
)
from .jensen import ZeroDensityEstimate, jensen_zero_density, radial_bessel
from .patching import PatchPolynomial, patch_polynomial
from .periodicity import (
    PeriodicityReport,
    detect_period,
    find_period,
    periodic_pattern_spectrum,
    propagate_step,
    random_translate,
)

__all__ = [
    "ConeSpec",
    "has_antipodal_pair",
    "is_pointed",
    "minor_cone_witness",
    "GapPolynomial",
    "PowerBound",
    "SupportSample",
    "arc_complement_sample",
    "build_gap_polynomial",
    "certify",
    "counterexample_set",
    "power_error_bound",
    "sample_set",
    "tensor_gap_polynomial",
    "ZeroDensityEstimate",
    "jensen_zero_density",
    "radial_bessel",
    "PatchPolynomial",
    "patch_polynomial",
    "PeriodicityReport",
    "detect_period",
    "find_period",
    "periodic_pattern_spectrum",
    "propagate_step",
    "random_translate",
]
