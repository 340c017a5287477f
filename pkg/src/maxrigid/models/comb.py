"""Randomly shifted Dirac combs and their discretization to the torus.

A comb of scale ``a`` is ``sum_k delta_{a (U + k)}`` with ``U`` uniform in
``[0, 1)^d``. Its covariance measure is ``a^-d sum_k delta_{a k} - a^-2d dx``
and Poisson summation gives the spectral measure

    S_a = (2 pi)^d a^(-2d) sum_{k != 0} delta_{2 pi k / a}.

A superposition of independent combs has the sum of these measures.
"""

from dataclasses import dataclass, field
import itertools

import numpy as np

from .._validation import check_dimension, check_points, check_positive, check_rng, wrap_angle
from ..functionals import DomainTag
from ..spectral import SpectralMeasure, _merge_atoms
from ..bessel import cube_transform

__all__ = [
    "CombModel",
    "comb_spectral_measure",
    "comb_tail_bound",
    "sample_comb",
    "count_in_cell",
    "discretized_spectral_measure",
]

MERGE_TOL = 1e-10
ZERO_TRANSFORM = 1e-14


@dataclass(frozen=True)
class CombModel:
    """Superposition of independent shifted lattices ``a_i (U_i + Z^d)``.

    Parameters
    ----------
    a : tuple of float
        Lattice scales.
    d : int
        Dimension.
    truncation : int
        Spectral atoms are kept for ``|k|_inf <= truncation``.
    """

    a: tuple = (1.0,)
    d: int = 1
    truncation: int = 64

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(check_positive(x, "a_i") for x in self.a))
        check_dimension(self.d)
        if int(self.truncation) < 1:
            raise ValueError("truncation must be at least 1")

    @property
    def intensity(self):
        return float(sum(x ** -self.d for x in self.a))


def _lattice_indices(d, truncation):
    rng = np.arange(-truncation, truncation + 1)
    k = np.array(list(itertools.product(rng, repeat=d)), dtype=float) if d > 1 else rng[:, None].astype(float)
    return k[np.any(k != 0, axis=1)]


def comb_spectral_measure(m):
    """Truncated spectral measure of a comb superposition on R^d.

    Atoms of different lattices that coincide (within ``1e-10`` relative
    to the location) are merged by adding weights.
    """
    d = m.d
    domain = DomainTag.continuous(d)
    if not m.a:
        return SpectralMeasure(domain, tag="comb")
    k = _lattice_indices(d, m.truncation)
    locs, weights = [], []
    for a in m.a:
        locs.append(2 * np.pi * k / a)
        weights.append(np.full(len(k), (2 * np.pi) ** d * a ** (-2 * d)))
    loc = np.concatenate(locs)
    w = np.concatenate(weights)
    scale = max(1.0, float(np.max(np.abs(loc))))
    loc, w = _merge_atoms(loc, w, MERGE_TOL * scale)
    return SpectralMeasure(domain, None, loc, w, tag="comb", meta={"a": list(m.a), "truncation": m.truncation})


def comb_tail_bound(m):
    """Upper bound on the kappa-weighted mass of the atoms beyond the truncation.

    Shell ``|k|_inf = j`` has at most ``2d (2j+1)^(d-1)`` indices, each with
    ``|u| >= 2 pi j / a`` and kappa at most ``(2 pi j / a)^(-d-1)``, so the
    shell sum is at most ``C j^-2`` and the tail at most ``C / T``.
    """
    d, T = m.d, m.truncation
    total = 0.0
    for a in m.a:
        c = (2 * np.pi) ** d * a ** (-2 * d) * 2 * d * 3 ** (d - 1) * (2 * np.pi / a) ** (-d - 1)
        total += c / T
    return total


def sample_comb(m, window, rng=None):
    """Points of one realization of the comb inside ``window``.

    Parameters
    ----------
    m : CombModel
    window : tuple (lo, hi)
        Half-open box ``[lo, hi)``; scalars are accepted when ``d = 1``.
    rng : int, Generator or None
        One uniform shift per lattice is drawn, in the order of ``m.a``.

    Returns
    -------
    ndarray of shape (n, d)
        Points sorted lexicographically.
    """
    rng = check_rng(rng)
    lo = np.broadcast_to(np.asarray(window[0], dtype=float), (m.d,))
    hi = np.broadcast_to(np.asarray(window[1], dtype=float), (m.d,))
    pts = []
    for a in m.a:
        u = rng.random(m.d)
        kmin = np.ceil(lo / a - u).astype(int)
        kmax = np.ceil(hi / a - u).astype(int) - 1
        if np.any(kmax < kmin):
            continue
        axes = [a * (u[l] + np.arange(kmin[l], kmax[l] + 1)) for l in range(m.d)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, m.d)
        pts.append(grid)
    if not pts:
        return np.zeros((0, m.d))
    pts = np.concatenate(pts)
    return pts[np.lexsort(pts.T[::-1])]


def count_in_cell(points, corner, side):
    """Number of points in the half-open cube ``corner + [0, side)^d``."""
    pts = np.atleast_2d(points)
    corner = np.asarray(corner, dtype=float)
    inside = np.all((pts >= corner) & (pts < corner + side), axis=1)
    return int(inside.sum())


def discretized_spectral_measure(S, t):
    """Spectral measure on the torus of the cell counts ``X_k = M(t k + [0, t)^d)``.

    Each atom ``(s, a)`` of ``S`` goes to the angle ``t s`` folded to
    ``[-pi, pi)`` with weight ``t^(2d) a |J(t s)|^2``. Atoms killed by a
    zero of ``J`` are dropped and coinciding folded atoms merged within
    ``1e-10``.

    Parameters
    ----------
    S : SpectralMeasure
        Purely atomic measure on R^d.
    t : float
        Cell side.

    Returns
    -------
    SpectralMeasure
        Purely atomic measure on the torus, total mass ``(2 pi)^d`` times
        the variance of one cell count.
    """
    t = check_positive(t, "t")
    if S.domain.is_torus:
        raise ValueError("discretization applies to measures on R^d")
    if not S.is_atomic:
        raise ValueError("discretization needs a purely atomic spectral measure")
    d = S.d
    loc = S.atom_locations
    J = np.abs(cube_transform(t * loc)) if len(loc) else np.zeros(0)
    keep = J >= ZERO_TRANSFORM
    w = t ** (2 * d) * S.atom_weights[keep] * J[keep] ** 2
    angles = wrap_angle(t * loc[keep])
    angles, w = _merge_atoms(angles, w, MERGE_TOL)
    out = SpectralMeasure(DomainTag.discrete(d), None, angles, w, tag="discretized", meta={"t": t})
    assert out.is_atomic
    return out
