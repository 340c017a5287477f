"""Covariance models: triangle (ball autocorrelation), lattice combs, Gaussian fields."""

from ..bessel import bessel_transform, cube_transform, scaled_bessel, unit_ball_volume
from .comb import (
    CombModel,
    comb_spectral_measure,
    comb_tail_bound,
    count_in_cell,
    discretized_spectral_measure,
    sample_comb,
)
from .gaussian import FieldSample, GridSpec, circulant_eigenvalues, sample_gaussian_batch, sample_gaussian_field
from .triangle import TriangleModel, ball_autocorrelation, triangle_covariance, triangle_spectral_density

__all__ = [
    "bessel_transform",
    "cube_transform",
    "scaled_bessel",
    "unit_ball_volume",
    "CombModel",
    "comb_spectral_measure",
    "comb_tail_bound",
    "count_in_cell",
    "discretized_spectral_measure",
    "sample_comb",
    "FieldSample",
    "GridSpec",
    "circulant_eigenvalues",
    "sample_gaussian_batch",
    "sample_gaussian_field",
    "TriangleModel",
    "ball_autocorrelation",
    "triangle_covariance",
    "triangle_spectral_density",
]
