"""Dual-space domains and linear test functionals with closed-form transforms.

Transforms follow ``f^(u) = int exp(-i u.x) f(x) dx`` on R^d and
``f^(theta) = sum_k exp(i k.theta) f(k)`` on Z^d, the latter being the
generating function ``sum u^k f(k)`` at ``u = exp(i theta)``.
"""

from dataclasses import dataclass, field
import itertools

import numpy as np

from ._validation import check_dimension, check_points, check_positive
from .bessel import bessel_transform, cube_transform

__all__ = [
    "DomainTag",
    "PointMass",
    "Cell",
    "Ball",
    "WeightedSum",
    "fourier_of_functional",
]


@dataclass(frozen=True)
class DomainTag:
    """Space on which a random measure lives.

    ``continuous`` fields live on R^d with dual R^d; ``discrete`` fields
    live on Z^d with dual the torus, coordinates in [-pi, pi).
    """

    kind: str
    d: int

    def __post_init__(self):
        if self.kind not in ("continuous", "discrete"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        check_dimension(self.d)

    @classmethod
    def continuous(cls, d=1):
        return cls("continuous", d)

    @classmethod
    def discrete(cls, d=1):
        return cls("discrete", d)

    @property
    def is_torus(self):
        return self.kind == "discrete"

    def to_dict(self):
        return {"kind": self.kind, "d": self.d}

    @classmethod
    def from_dict(cls, data):
        return cls(data["kind"], int(data["d"]))


class LinearFunctional:
    """Base class for test functions ``f`` with evaluable ``f^``."""

    domain: DomainTag

    def fourier(self, u):
        raise NotImplementedError

    def support_box(self):
        """Return ``(lo, hi)`` bounding the support."""
        raise NotImplementedError

    def translate(self, x):
        raise NotImplementedError

    @property
    def d(self):
        return self.domain.d

    def support_radius(self):
        lo, hi = self.support_box()
        return float(np.max(np.maximum(np.abs(lo), np.abs(hi))))

    def extent(self):
        lo, hi = self.support_box()
        return float(np.max(hi - lo))

    def __mul__(self, weight):
        return WeightedSum(((self, complex(weight)),), self.domain)

    __rmul__ = __mul__


def _as_vector(x, d):
    return check_points(x, d)[0]


def _phase(u, x, domain):
    sign = 1.0 if domain.is_torus else -1.0
    return np.exp(sign * 1j * (u @ x))


@dataclass(frozen=True, eq=False)
class PointMass(LinearFunctional):
    """Dirac mass at ``x`` (an integer site on Z^d)."""

    x: np.ndarray
    domain: DomainTag = field(default_factory=DomainTag.continuous)

    def __post_init__(self):
        object.__setattr__(self, "x", _as_vector(self.x, self.domain.d))

    def fourier(self, u):
        u = check_points(u, self.d)
        return _phase(u, self.x, self.domain)

    def support_box(self):
        return self.x.copy(), self.x.copy()

    def translate(self, x):
        return PointMass(self.x + _as_vector(x, self.d), self.domain)

    def __eq__(self, other):
        return isinstance(other, PointMass) and self.domain == other.domain and np.array_equal(self.x, other.x)

    def __hash__(self):
        return hash(("point", self.domain, tuple(self.x)))


@dataclass(frozen=True, eq=False)
class Cell(LinearFunctional):
    """Indicator of the cube ``corner + [0, side)^d``.

    On Z^d the side must be a positive integer and the cube holds
    ``side**d`` sites.
    """

    corner: np.ndarray
    side: float
    domain: DomainTag = field(default_factory=DomainTag.continuous)

    def __post_init__(self):
        object.__setattr__(self, "corner", _as_vector(self.corner, self.domain.d))
        object.__setattr__(self, "side", check_positive(self.side, "side"))
        if self.domain.is_torus and self.side != round(self.side):
            raise ValueError("discrete cells need an integer side")

    def fourier(self, u):
        u = check_points(u, self.d)
        t = self.side
        if not self.domain.is_torus:
            return t ** self.d * _phase(u, self.corner, self.domain) * cube_transform(t * u)
        # geometric sums prod_l sum_{j<t} exp(i j theta_l)
        n = int(round(t))
        z = np.exp(1j * u)
        close = np.abs(z - 1) < 1e-8
        safe = np.where(close, 2.0, z)
        geo = np.where(close, n, (safe ** n - 1) / (safe - 1))
        return _phase(u, self.corner, self.domain) * np.prod(geo, axis=1)

    def support_box(self):
        # on Z^d the last site is corner + side - 1
        hi = self.corner + (self.side - 1 if self.domain.is_torus else self.side)
        return self.corner.copy(), hi

    def translate(self, x):
        return Cell(self.corner + _as_vector(x, self.d), self.side, self.domain)

    @property
    def volume(self):
        return self.side ** self.d

    def __eq__(self, other):
        return (
            isinstance(other, Cell)
            and self.domain == other.domain
            and self.side == other.side
            and np.array_equal(self.corner, other.corner)
        )

    def __hash__(self):
        return hash(("cell", self.domain, self.side, tuple(self.corner)))


@dataclass(frozen=True, eq=False)
class Ball(LinearFunctional):
    """Indicator of the closed ball ``B(center, radius)``."""

    center: np.ndarray
    radius: float
    domain: DomainTag = field(default_factory=DomainTag.continuous)

    def __post_init__(self):
        object.__setattr__(self, "center", _as_vector(self.center, self.domain.d))
        object.__setattr__(self, "radius", check_positive(self.radius, "radius"))

    def _sites(self):
        r = int(np.floor(self.radius))
        offsets = np.array(list(itertools.product(range(-r, r + 1), repeat=self.d)), dtype=float)
        offsets = offsets[np.linalg.norm(offsets, axis=1) <= self.radius + 1e-12]
        return offsets + np.round(self.center)

    def fourier(self, u):
        u = check_points(u, self.d)
        if self.domain.is_torus:
            return np.exp(1j * (u @ self._sites().T)).sum(axis=1)
        r = self.radius
        return r ** self.d * _phase(u, self.center, self.domain) * bessel_transform(self.d, r * u)

    def support_box(self):
        return self.center - self.radius, self.center + self.radius

    def translate(self, x):
        return Ball(self.center + _as_vector(x, self.d), self.radius, self.domain)

    def __eq__(self, other):
        return (
            isinstance(other, Ball)
            and self.domain == other.domain
            and self.radius == other.radius
            and np.array_equal(self.center, other.center)
        )

    def __hash__(self):
        return hash(("ball", self.domain, self.radius, tuple(self.center)))


@dataclass(frozen=True, eq=False)
class WeightedSum(LinearFunctional):
    """Finite combination ``sum_j w_j f_j`` of functionals with complex weights."""

    terms: tuple
    domain: DomainTag = field(default_factory=DomainTag.continuous)

    def __post_init__(self):
        terms = tuple((f, complex(w)) for f, w in self.terms)
        for f, _ in terms:
            if f.domain != self.domain:
                raise ValueError("all terms must share the domain of the sum")
        object.__setattr__(self, "terms", terms)

    def fourier(self, u):
        u = check_points(u, self.d)
        out = np.zeros(len(u), dtype=complex)
        for f, w in self.terms:
            out += w * f.fourier(u)
        return out

    def support_box(self):
        if not self.terms:
            z = np.zeros(self.d)
            return z, z
        boxes = [f.support_box() for f, _ in self.terms]
        return np.min([b[0] for b in boxes], axis=0), np.max([b[1] for b in boxes], axis=0)

    def translate(self, x):
        return WeightedSum(tuple((f.translate(x), w) for f, w in self.terms), self.domain)

    def weight_scale(self):
        """Largest weight modulus, used to normalize quadrature tolerances."""
        scales = [abs(w) * (f.weight_scale() if isinstance(f, WeightedSum) else 1.0) for f, w in self.terms]
        return max(scales, default=0.0)

    def __eq__(self, other):
        return isinstance(other, WeightedSum) and self.domain == other.domain and self.terms == other.terms

    def __hash__(self):
        return hash(("sum", self.domain, self.terms))


def fourier_of_functional(f, u):
    """Evaluate ``f^`` at the dual points ``u``.

    Parameters
    ----------
    f : LinearFunctional
    u : array_like
        Dual points of shape (n, d), or a single point.

    Returns
    -------
    ndarray of complex, shape (n,)
    """
    return f.fourier(u)
