"""Triangle covariance fields and their Bessel spectral densities.

``Delta_r = 1_{B(0,r)} * 1_{B(0,r)}`` is the autocorrelation of a ball of
radius ``r``; with ``r = 1`` it is supported on ``B(0, 2)`` and equals
``(2 - |x|)_+`` in dimension one. A TriangleModel has covariance
``scale * Delta_r(x)^q``. For ``q = 1`` the spectral density is
``scale * r^(2d) J_d(r u)^2``; for ``q >= 2`` it is the transform of the
pointwise power, i.e. ``(2 pi)^(-d(q-1))`` times the ``q``-fold
self-convolution of the ``q = 1`` density, evaluated here as a radial
Hankel transform of the compactly supported covariance.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import special

from .._validation import check_dimension, check_points, check_positive
from ..functionals import DomainTag
from ..quadrature import gauss_panels
from ..spectral import CovarianceKernel, Density, SpectralMeasure
from ..bessel import bessel_transform, scaled_bessel, unit_ball_volume

__all__ = [
    "TriangleModel",
    "TriangleDensity",
    "ball_autocorrelation",
    "triangle_covariance",
    "triangle_spectral_density",
    "triangle_cell_covariance",
]


def ball_autocorrelation(d, h, radius=1.0):
    """Volume of ``B(0, r) cap B(h, r)`` as a function of ``|h|``."""
    h = np.abs(np.asarray(h, dtype=float))
    r = radius
    x = np.clip(1.0 - h ** 2 / (4 * r * r), 0.0, 1.0)
    val = unit_ball_volume(d) * r ** d * special.betainc((d + 1) / 2, 0.5, x)
    return np.where(h < 2 * r, val, 0.0)


@dataclass(frozen=True)
class TriangleModel:
    """Random field with covariance ``scale * Delta_r^q``.

    Parameters
    ----------
    d : int
        Dimension.
    q : int
        Power of the triangle covariance, ``q >= 1``.
    scale : float
        Overall variance factor; ``scale = 1/2`` with ``r = 1`` gives the
        normalized ``(1 - |x|/2)_+`` in dimension one.
    radius : float
        Ball radius ``r``; ``r = 1/2`` gives ``(1 - |x|)_+`` in dimension one.
    """

    d: int = 1
    q: int = 1
    scale: float = 1.0
    radius: float = 1.0

    def __post_init__(self):
        check_dimension(self.d)
        if int(self.q) != self.q or self.q < 1:
            raise ValueError("q must be a positive integer")
        check_positive(self.scale, "scale")
        check_positive(self.radius, "radius")

    @property
    def support_radius(self):
        return 2.0 * self.radius

    @property
    def domain(self):
        return DomainTag.continuous(self.d)

    def covariance(self, x):
        return triangle_covariance(self, x)

    def density(self):
        return TriangleDensity(self)

    def spectral_measure(self):
        return SpectralMeasure(self.domain, self.density(), tag=f"triangle-d{self.d}")

    def kernel(self):
        cell_cov = (lambda a, h, b, k: triangle_cell_covariance(self, a, h, b, k)) if self.d == 1 else None
        return CovarianceKernel(self.domain, self.covariance, self.support_radius, cell_cov)


def triangle_covariance(m, x):
    """``scale * Delta_r(x)^q`` at points ``x`` of shape (n, d)."""
    x = check_points(x, m.d)
    return m.scale * ball_autocorrelation(m.d, np.linalg.norm(x, axis=1), m.radius) ** m.q


def _hankel_transform(m, u):
    # radial transform (2 pi)^(d/2) int_0^{2r} g(rho) B_{d/2-1}(u rho)/(u rho)^{d/2-1} rho^{d-1} drho
    d, top = m.d, 2 * m.radius
    out = np.empty_like(u)
    order = np.argsort(u)
    chunk = 256
    for start in range(0, len(u), chunk):
        idx = order[start:start + chunk]
        umax = u[idx].max()
        panels = int(np.ceil(umax * top / np.pi)) + 8
        rho, w = gauss_panels(0.0, top, top / panels, 20)
        g = ball_autocorrelation(d, rho, m.radius) ** m.q * rho ** (d - 1)
        kern = scaled_bessel(d / 2 - 1, np.outer(u[idx], rho))
        out[idx] = kern @ (g * w)
    return m.scale * (2 * np.pi) ** (d / 2) * out


def triangle_spectral_density(m, u):
    """Spectral density of ``m`` at dual points ``u`` of shape (n, d)."""
    u = check_points(u, m.d)
    r = np.linalg.norm(u, axis=1)
    if m.q == 1:
        return m.scale * m.radius ** (2 * m.d) * bessel_transform(m.d, m.radius * r) ** 2
    return np.maximum(_hankel_transform(m, r), 0.0)


class TriangleDensity(Density):
    tag = "triangle"

    def __init__(self, model):
        self.model = model
        self.d = model.d

    def __call__(self, u):
        return triangle_spectral_density(self.model, u)

    def params(self):
        m = self.model
        return {"d": m.d, "q": m.q, "scale": m.scale, "radius": m.radius}

    @classmethod
    def from_params(cls, params):
        return cls(TriangleModel(**params))

    @property
    def factors(self):
        return None


def _second_antiderivative(m, x):
    # G(x) = int_0^|x| (|x| - s) C(s) ds for C(s) = scale (2r - s)^q on [0, 2r]
    x = np.abs(x)
    t = 2 * m.radius
    q = m.q
    w = np.clip(t - x, 0.0, None)
    val = (x - t) * (t ** (q + 1) - w ** (q + 1)) / (q + 1) + (t ** (q + 2) - w ** (q + 2)) / (q + 2)
    return m.scale * val


def triangle_cell_covariance(m, a, h, b, k):
    """``Cov(M([a, a+h]), M([b, b+k]))`` in closed form, dimension one.

    Pairs further apart than the covariance range are exactly zero.
    Arguments broadcast.
    """
    if m.d != 1:
        raise ValueError("closed-form cell covariance is one-dimensional")
    a, h, b, k = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, h, b, k)))
    G = lambda x: _second_antiderivative(m, x)
    val = G(a + h - b) + G(a - b - k) - G(a + h - b - k) - G(a - b)
    gap = np.maximum(b - (a + h), a - (b + k))
    return np.where(gap >= m.support_radius, 0.0, val)
