"""Fourier transforms of the unit ball and the unit cube.

With the convention ``f^(u) = int exp(-i u.x) f(x) dx`` the transform of
the unit-ball indicator in dimension ``d`` is

    J_d(u) = (2 pi)^(d/2) B_{d/2}(|u|) / |u|^(d/2),

where ``B_nu`` is the Bessel function of the first kind. ``J_1 = 2 sinc``
and ``J_d(0)`` is the volume of the unit ball.
"""

import math

import numpy as np
from scipy import special

_SERIES_CUTOFF = 1.0
_SERIES_TERMS = 24


def unit_ball_volume(d):
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def _scaled_bessel_series(nu, r):
    # B_nu(r) / r^nu by its power series, accurate for r < 1
    r2 = (r / 2.0) ** 2
    term = np.full_like(r, 1.0 / (2.0 ** nu * math.gamma(nu + 1)))
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * (-r2) / (k * (k + nu))
        total += term
    return total


def scaled_bessel(nu, r):
    """Return ``B_nu(r) / r**nu`` for ``r >= 0`` with the limit at 0."""
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    small = r < _SERIES_CUTOFF
    out[small] = _scaled_bessel_series(nu, r[small])
    big = ~small
    out[big] = special.jv(nu, r[big]) / r[big] ** nu
    return out


def bessel_transform(d, u):
    """Fourier transform of the unit-ball indicator in dimension ``d``.

    Parameters
    ----------
    d : int
        Dimension.
    u : array_like
        Dual points, shape (n, d), or radii ``|u|`` as a 1-D array.

    Returns
    -------
    ndarray
        Real values ``J_d(u)``.
    """
    u = np.asarray(u, dtype=float)
    r = np.linalg.norm(u, axis=-1) if u.ndim == 2 else np.abs(u)
    return (2 * np.pi) ** (d / 2) * scaled_bessel(d / 2, r)


def cube_transform(s):
    """Transform of the indicator of ``[0, 1]^d`` at dual points ``s``.

    ``J(s) = prod_l exp(-i s_l / 2) sinc(s_l / 2)`` with the unnormalized
    ``sinc(x) = sin(x) / x``.
    """
    s = np.atleast_2d(np.asarray(s, dtype=float))
    half = s / 2.0
    mod = np.prod(np.sinc(half / np.pi), axis=1)
    return mod * np.exp(-1j * half.sum(axis=1))
