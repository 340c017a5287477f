"""Spectral measures, the variance formula and the checks built on it.

A spectral measure is a nonnegative density plus a finite list of atoms on
the dual space, R^d for fields on R^d and the torus [-pi, pi)^d for fields
on Z^d. Linear statistics have

    Var(M(f)) = (2 pi)^(-d) int |f^(u)|^2 S(du),

and the covariance is the inverse transform of S. Densities are closed
forms with tags so that they serialize to JSON and so that quadrature
error is controlled by the integrator rather than by a sampled grid.
"""

from dataclasses import dataclass, field
import json

import numpy as np
from scipy import ndimage

from ._validation import check_points, check_positive, wrap_angle
from .exceptions import Inconclusive
from .functionals import Cell, DomainTag, PointMass, WeightedSum
from .quadrature import QuadratureSpec, gauss_panels, integrate

__all__ = [
    "Density",
    "ZeroDensity",
    "ConstantDensity",
    "ProductDensity",
    "DeepZeroDensity",
    "OutsideBallDensity",
    "PowerLawDensity",
    "ScaledDensity",
    "ClippedDensity",
    "CustomDensity",
    "density_from_dict",
    "SpectralMeasure",
    "CovarianceKernel",
    "spectral_inner",
    "variance_of_statistic",
    "covariance_eval",
    "kappa",
    "check_tempered",
    "check_symmetry",
    "spectral_gap_search",
    "tensor_domination_check",
    "TemperedReport",
    "SymmetryReport",
    "GapRegion",
    "DominationReport",
]


# ---------------------------------------------------------------- densities


class Density:
    """Evaluable nonnegative function on the dual space.

    Subclasses implement ``__call__`` on points of shape (n, d) and
    ``params`` for serialization. ``factors`` is a list of 1-D densities
    when the density is a tensor product, which lets integrals against
    separable integrands factorize.
    """

    tag = "abstract"
    d = 1

    def __call__(self, u):
        raise NotImplementedError

    def params(self):
        raise NotImplementedError

    def log(self, u):
        """``ln s(u)``; subclasses override when a direct form avoids underflow."""
        with np.errstate(divide="ignore"):
            return np.log(self(u))

    @property
    def factors(self):
        return None

    @property
    def breakpoints(self):
        """Per-axis abscissae where the density has kinks or jumps."""
        return ()

    @property
    def is_zero(self):
        return False

    def to_dict(self):
        return {"tag": self.tag, "params": self.params()}


class ZeroDensity(Density):
    tag = "zero"

    def __init__(self, d=1):
        self.d = int(d)

    def __call__(self, u):
        return np.zeros(len(check_points(u, self.d)))

    def params(self):
        return {"d": self.d}

    @property
    def is_zero(self):
        return True

    @property
    def factors(self):
        return [ZeroDensity(1)] + [ConstantDensity(1, 1.0)] * (self.d - 1)


class ConstantDensity(Density):
    """Constant density ``value`` (Lebesgue measure when ``value = 1``)."""

    tag = "constant"

    def __init__(self, d=1, value=1.0):
        self.d = int(d)
        self.value = float(value)
        if self.value < 0:
            raise ValueError("density value must be nonnegative")

    def __call__(self, u):
        return np.full(len(check_points(u, self.d)), self.value)

    def params(self):
        return {"d": self.d, "value": self.value}

    @property
    def is_zero(self):
        return self.value == 0.0

    @property
    def factors(self):
        if self.d == 1:
            return None
        return [ConstantDensity(1, self.value)] + [ConstantDensity(1, 1.0)] * (self.d - 1)


class ProductDensity(Density):
    """Tensor product ``s_1(u_1) ... s_d(u_d)`` of 1-D densities."""

    tag = "product"

    def __init__(self, factors):
        factors = list(factors)
        for f in factors:
            if f.d != 1:
                raise ValueError("product factors must be one-dimensional")
        self._factors = factors
        self.d = len(factors)

    def __call__(self, u):
        u = check_points(u, self.d)
        out = np.ones(len(u))
        for l, f in enumerate(self._factors):
            out *= f(u[:, l:l + 1])
        return out

    def params(self):
        return {"factors": [f.to_dict() for f in self._factors]}

    def log(self, u):
        u = check_points(u, self.d)
        return sum(f.log(u[:, l:l + 1]) for l, f in enumerate(self._factors))

    @property
    def factors(self):
        return list(self._factors)

    @property
    def breakpoints(self):
        pts = set()
        for f in self._factors:
            pts.update(f.breakpoints)
        return tuple(sorted(pts))


class DeepZeroDensity(Density):
    """``s(u) = exp(-c |u - center|^(-beta))``: a zero of depth ``beta`` at ``center``.

    ``beta = 1`` gives the exponentially deep zero ``exp(-1/|u|)``.
    """

    tag = "deep_zero"

    def __init__(self, beta=1.0, c=1.0, center=0.0, d=1):
        self.beta = check_positive(beta, "beta")
        self.c = check_positive(c, "c")
        self.center = float(center)
        self.d = int(d)

    def __call__(self, u):
        u = check_points(u, self.d)
        r = np.linalg.norm(u - self.center, axis=1)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(r > 0, np.exp(-self.c * r ** (-self.beta)), 0.0)

    def log(self, u):
        u = check_points(u, self.d)
        r = np.linalg.norm(u - self.center, axis=1)
        with np.errstate(divide="ignore"):
            return np.where(r > 0, -self.c * r ** (-self.beta), -np.inf)

    def params(self):
        return {"beta": self.beta, "c": self.c, "center": self.center, "d": self.d}

    @property
    def breakpoints(self):
        return (self.center,)


class OutsideBallDensity(Density):
    """``value * 1{|u| >= radius}``; a gap around the origin."""

    tag = "outside_ball"

    def __init__(self, d=1, radius=1.0, value=1.0):
        self.d = int(d)
        self.radius = check_positive(radius, "radius")
        self.value = float(value)

    def __call__(self, u):
        u = check_points(u, self.d)
        return np.where(np.linalg.norm(u, axis=1) >= self.radius, self.value, 0.0)

    def params(self):
        return {"d": self.d, "radius": self.radius, "value": self.value}

    @property
    def breakpoints(self):
        return (-self.radius, self.radius)


class PowerLawDensity(Density):
    """``(1 + |u|)^power``."""

    tag = "power_law"

    def __init__(self, d=1, power=-2.0):
        self.d = int(d)
        self.power = float(power)

    def __call__(self, u):
        u = check_points(u, self.d)
        return (1.0 + np.linalg.norm(u, axis=1)) ** self.power

    def params(self):
        return {"d": self.d, "power": self.power}

    @property
    def breakpoints(self):
        return (0.0,)


class ScaledDensity(Density):
    """``factor * inner``."""

    tag = "scaled"

    def __init__(self, inner, factor):
        self.inner = inner
        self.factor = float(factor)
        if self.factor < 0:
            raise ValueError("scale factor must be nonnegative")
        self.d = inner.d

    def __call__(self, u):
        return self.factor * self.inner(u)

    def log(self, u):
        with np.errstate(divide="ignore"):
            return np.log(self.factor) + self.inner.log(u)

    def params(self):
        return {"inner": self.inner.to_dict(), "factor": self.factor}

    @property
    def factors(self):
        inner = self.inner.factors
        if inner is None:
            return None
        return [ScaledDensity(inner[0], self.factor)] + list(inner[1:])

    @property
    def breakpoints(self):
        return self.inner.breakpoints

    @property
    def is_zero(self):
        return self.factor == 0.0 or self.inner.is_zero


class ClippedDensity(Density):
    """``min(inner, cap)``."""

    tag = "clipped"

    def __init__(self, inner, cap):
        self.inner = inner
        self.cap = float(cap)
        self.d = inner.d

    def __call__(self, u):
        return np.minimum(self.inner(u), self.cap)

    def log(self, u):
        with np.errstate(divide="ignore"):
            return np.minimum(self.inner.log(u), np.log(self.cap))

    def params(self):
        return {"inner": self.inner.to_dict(), "cap": self.cap}

    @property
    def breakpoints(self):
        return self.inner.breakpoints


class CustomDensity(Density):
    """Wrap an arbitrary callable; not serializable."""

    tag = "custom"

    def __init__(self, func, d=1, breakpoints=(), factors=None):
        self.func = func
        self.d = int(d)
        self._breakpoints = tuple(breakpoints)
        self._factors = factors

    def __call__(self, u):
        pts = check_points(u, self.d)
        return np.asarray(self.func(pts), dtype=float).reshape(len(pts))

    def params(self):
        raise TypeError("custom densities cannot be serialized")

    @property
    def factors(self):
        return self._factors

    @property
    def breakpoints(self):
        return self._breakpoints


def _triangle_from_params(params):
    from .models.triangle import TriangleDensity

    return TriangleDensity.from_params(params)


_REGISTRY = {
    "zero": lambda p: ZeroDensity(**p),
    "constant": lambda p: ConstantDensity(**p),
    "product": lambda p: ProductDensity([density_from_dict(f) for f in p["factors"]]),
    "deep_zero": lambda p: DeepZeroDensity(**p),
    "outside_ball": lambda p: OutsideBallDensity(**p),
    "power_law": lambda p: PowerLawDensity(**p),
    "scaled": lambda p: ScaledDensity(density_from_dict(p["inner"]), p["factor"]),
    "clipped": lambda p: ClippedDensity(density_from_dict(p["inner"]), p["cap"]),
    "triangle": _triangle_from_params,
}


def density_from_dict(data):
    """Rebuild a density from its ``{"tag", "params"}`` document."""
    tag = data["tag"]
    if tag not in _REGISTRY:
        raise ValueError(f"unknown density tag {tag!r}")
    return _REGISTRY[tag](dict(data.get("params", {})))


# --------------------------------------------------------- spectral measure


def _merge_atoms(loc, w, tol):
    if len(loc) == 0:
        return loc, w
    order = np.lexsort(loc.T[::-1])
    loc, w = loc[order], w[order]
    out_loc, out_w = [loc[0]], [w[0]]
    for x, a in zip(loc[1:], w[1:]):
        if np.max(np.abs(x - out_loc[-1])) <= tol:
            out_w[-1] += a
        else:
            out_loc.append(x)
            out_w.append(a)
    return np.array(out_loc), np.array(out_w)


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Density plus atoms on the dual space.

    Parameters
    ----------
    domain : DomainTag
    density : Density, optional
        Absolutely continuous part; the zero density when omitted.
    atom_locations : array_like of shape (m, d), optional
    atom_weights : array_like of shape (m,), optional
        Nonnegative weights. On the torus, locations are folded to
        [-pi, pi) on construction.
    tag : str, optional
        Free-form provenance label (e.g. ``"comb"``).
    """

    domain: DomainTag
    density: Density = None
    atom_locations: np.ndarray = None
    atom_weights: np.ndarray = None
    tag: str | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        d = self.domain.d
        density = self.density if self.density is not None else ZeroDensity(d)
        if density.d != d:
            raise ValueError(f"density dimension {density.d} does not match domain dimension {d}")
        loc = np.zeros((0, d)) if self.atom_locations is None else np.asarray(self.atom_locations, dtype=float)
        loc = loc.reshape(-1, d)
        w = np.zeros(0) if self.atom_weights is None else np.asarray(self.atom_weights, dtype=float).ravel()
        if len(w) != len(loc):
            raise ValueError("atom locations and weights differ in length")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("atom weights must be finite and nonnegative")
        if self.domain.is_torus:
            loc = wrap_angle(loc)
        loc.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "density", density)
        object.__setattr__(self, "atom_locations", loc)
        object.__setattr__(self, "atom_weights", w)

    # construction helpers

    @classmethod
    def zero(cls, domain):
        return cls(domain)

    @classmethod
    def lebesgue(cls, domain, value=1.0):
        return cls(domain, ConstantDensity(domain.d, value))

    @classmethod
    def atomic(cls, domain, locations, weights, tag=None, merge_tol=None):
        loc = np.asarray(locations, dtype=float).reshape(-1, domain.d)
        w = np.asarray(weights, dtype=float).ravel()
        if domain.is_torus:
            loc = wrap_angle(loc)
        if merge_tol is not None:
            loc, w = _merge_atoms(loc, w, merge_tol)
        return cls(domain, None, loc, w, tag)

    @property
    def d(self):
        return self.domain.d

    @property
    def n_atoms(self):
        return len(self.atom_weights)

    @property
    def is_atomic(self):
        return self.density.is_zero

    def atom_mass(self):
        return float(np.sum(self.atom_weights))

    def total_mass(self, quadrature=None):
        """``S(dual space)``; finite on the torus, may diverge on R^d."""
        mass = self.atom_mass()
        if self.density.is_zero:
            return mass
        res = integrate(self.density, self.d, quadrature, torus=self.domain.is_torus)
        return mass + float(res.value.real)

    def with_weights(self, weights):
        return SpectralMeasure(self.domain, self.density, self.atom_locations, weights, self.tag, dict(self.meta))

    def scaled(self, factor):
        density = self.density if factor == 1 else ScaledDensity(self.density, factor)
        return SpectralMeasure(self.domain, density, self.atom_locations, factor * self.atom_weights, self.tag)

    def symmetrized(self):
        """Average the atoms with their reflections ``u -> -u``."""
        loc = np.concatenate([self.atom_locations, -self.atom_locations])
        w = np.concatenate([self.atom_weights, self.atom_weights]) / 2
        if self.domain.is_torus:
            loc = wrap_angle(loc)
        loc, w = _merge_atoms(loc, w, 1e-12)
        return SpectralMeasure(self.domain, self.density, loc, w, self.tag)

    # serialization

    def to_dict(self):
        return {
            "domain": self.domain.to_dict(),
            "density": self.density.to_dict(),
            "atoms": [[loc.tolist(), float(w)] for loc, w in zip(self.atom_locations, self.atom_weights)],
            "tag": self.tag,
        }

    @classmethod
    def from_dict(cls, data):
        domain = DomainTag.from_dict(data["domain"])
        density = density_from_dict(data["density"]) if data.get("density") else None
        atoms = data.get("atoms", [])
        loc = np.array([a[0] for a in atoms], dtype=float).reshape(-1, domain.d)
        w = np.array([a[1] for a in atoms], dtype=float)
        return cls(domain, density, loc, w, data.get("tag"))

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CovarianceKernel:
    """Closed-form covariance ``x -> C(x)`` on R^d or Z^d.

    ``cell_cov`` optionally gives ``Cov(M(cell_a), M(cell_b))`` in closed
    form for 1-D cells ``(corner, side)``; the predictor uses it to skip
    spectral quadrature.
    """

    domain: DomainTag
    func: object
    support_radius: float | None = None
    cell_cov: object = None

    def __call__(self, x):
        x = check_points(x, self.domain.d)
        return np.asarray(self.func(x), dtype=float)


# ----------------------------------------------------------------- integrals


def _functional_scale(f):
    return f.weight_scale() if isinstance(f, WeightedSum) else 1.0


def _normalized(f):
    scale = _functional_scale(f)
    if scale == 0.0:
        return f, 0.0
    if scale == 1.0:
        return f, 1.0
    return WeightedSum(((f, 1.0 / scale),), f.domain), scale


def _axis_transform(f, axis, u1):
    """1-D factor of ``f^`` along ``axis`` for cells and point masses."""
    if isinstance(f, Cell):
        t, c = f.side, f.corner[axis]
        s = t * u1
        return t * np.exp(-1j * u1 * c) * np.sinc(s / (2 * np.pi)) * np.exp(-0.5j * s)
    return np.exp(-1j * u1 * f.x[axis])


def _lengths(f, g):
    lo_f, hi_f = f.support_box()
    lo_g, hi_g = g.support_box()
    lo, hi = np.minimum(lo_f, lo_g), np.maximum(hi_f, hi_g)
    span = float(np.max(hi - lo))
    feats = [x.side for x in (f, g) if isinstance(x, Cell)]
    feats += [2 * x.radius for x in (f, g) if hasattr(x, "radius")]
    feature = min(feats) if feats else max(span, 1.0)
    return max(span, 1e-3), feature


def _density_integral(f, g, S, spec):
    density = S.density
    d = S.d
    if density.is_zero:
        return 0.0 + 0.0j
    if S.domain.is_torus:
        span, _ = _lengths(f, g)
        res = integrate(lambda u: f.fourier(u) * np.conj(g.fourier(u)) * density(u), d, spec, torus=True,
                        length_scale=span)
        return res.value
    factors = density.factors
    simple = all(isinstance(x, (Cell, PointMass)) for x in (f, g)) and not any(
        isinstance(x, PointMass) for x in (f, g))
    if d > 1 and factors is not None and simple:
        total = 1.0 + 0.0j
        for axis, s_l in enumerate(factors):
            if s_l.is_zero:
                return 0.0 + 0.0j
            span = max(f.support_box()[1][axis], g.support_box()[1][axis]) - min(
                f.support_box()[0][axis], g.support_box()[0][axis])
            feat = min(f.side, g.side)
            res = integrate(
                lambda u, a=axis, s=s_l: _axis_transform(f, a, u[:, 0]) * np.conj(_axis_transform(g, a, u[:, 0])) * s(u),
                1, spec, length_scale=max(span, 1e-3), feature=feat, breakpoints=s_l.breakpoints)
            total *= res.value
        return total
    span, feature = _lengths(f, g)
    res = integrate(lambda u: f.fourier(u) * np.conj(g.fourier(u)) * density(u), d, spec,
                    length_scale=span, feature=feature, breakpoints=density.breakpoints)
    return res.value


def spectral_inner(f, g, S, quadrature=None):
    """``(2 pi)^(-d) int f^ conj(g^) dS``, the covariance of ``M(f)`` and ``M(g)``.

    Functionals are normalized by their largest weight before integration
    so that the quadrature tolerance scales with them.
    """
    spec = quadrature or QuadratureSpec()
    if f.domain != S.domain or g.domain != S.domain:
        raise ValueError("functionals and spectral measure live on different domains")
    fn, cf = _normalized(f)
    gn, cg = _normalized(g)
    if cf == 0.0 or cg == 0.0:
        return 0.0 + 0.0j
    value = _density_integral(fn, gn, S, spec)
    if S.n_atoms:
        loc = S.atom_locations
        value += np.sum(S.atom_weights * fn.fourier(loc) * np.conj(gn.fourier(loc)))
    return complex(cf * cg * value / (2 * np.pi) ** S.d)


def variance_of_statistic(f, S, quadrature=None):
    """Variance of the linear statistic ``M(f)`` for spectral measure ``S``.

    Parameters
    ----------
    f : LinearFunctional
    S : SpectralMeasure
    quadrature : QuadratureSpec, optional

    Returns
    -------
    float
        ``(2 pi)^(-d) [int |f^|^2 s du + sum_j a_j |f^(u_j)|^2]``.

    Raises
    ------
    QuadratureDivergence
        If the truncated tail does not settle within the radius budget.
    """
    return max(0.0, spectral_inner(f, f, S, quadrature).real)


def _canonical_sign(x):
    nz = np.flatnonzero(x)
    if len(nz) and x[nz[0]] < 0:
        return -x
    return x


def covariance_eval(S, x, quadrature=None):
    """``C(x) = (2 pi)^(-d) [int cos(u.x) s(u) du + sum_j a_j cos(u_j.x)]``.

    ``x`` is replaced by ``-x`` when its first nonzero coordinate is
    negative, so ``C(x) == C(-x)`` holds bit for bit.
    """
    spec = quadrature or QuadratureSpec()
    x = _canonical_sign(check_points(x, S.d)[0].copy())
    value = 0.0
    if not S.density.is_zero:
        span = float(np.max(np.abs(x))) if np.any(x) else 1.0
        res = integrate(lambda u: np.cos(u @ x) * S.density(u), S.d, spec, torus=S.domain.is_torus,
                        length_scale=max(span, 1.0), breakpoints=S.density.breakpoints)
        value += res.value.real
    if S.n_atoms:
        value += float(np.sum(S.atom_weights * np.cos(S.atom_locations @ x)))
    return value / (2 * np.pi) ** S.d


# -------------------------------------------------------------------- checks


def kappa(u, domain):
    """Temperedness weight: ``(1 + |u|)^(-d-1)`` on R^d, 1 on the torus."""
    u = check_points(u, domain.d)
    if domain.is_torus:
        return np.ones(len(u))
    return (1.0 + np.linalg.norm(u, axis=1)) ** (-domain.d - 1)


@dataclass(frozen=True)
class TemperedReport:
    tempered: bool
    evidence: list
    ratio: float

    def __bool__(self):
        return self.tempered


def _shell_density_mass(density, d, lo, hi, panels):
    """``int_{lo <= |u|_inf < hi} kappa s du`` with geometric panels."""
    def func(u):
        return density(u) * (1.0 + np.linalg.norm(u, axis=1)) ** (-d - 1)

    width = (hi - lo) / panels
    if d == 1:
        x1, w1 = gauss_panels(lo, hi, width, 8, density.breakpoints)
        x = np.concatenate([-x1[::-1], x1])
        w = np.concatenate([w1[::-1], w1])
        return float(np.dot(func(x[:, None]), w))
    xs, ws = gauss_panels(-hi, hi, (2 * hi) / (2 * panels), 8)
    inner = np.abs(xs) < lo
    grid = np.stack(np.meshgrid(*([xs] * d), indexing="ij"), axis=-1).reshape(-1, d)
    wg = np.prod(np.stack(np.meshgrid(*([ws] * d), indexing="ij"), axis=-1).reshape(-1, d), axis=1)
    mask = ~np.all(np.stack(np.meshgrid(*([inner] * d), indexing="ij"), axis=-1).reshape(-1, d), axis=1)
    return float(np.dot(func(grid[mask]), wg[mask]))


def check_tempered(S, tol=1e-6, max_radius=1e8, r0=1.0):
    """Check ``int kappa dS < infinity`` from shell increments.

    The kappa-weighted mass of the shells ``2^j r0 <= |u|_inf < 2^(j+1) r0``
    is accumulated. The measure is declared tempered when the increments
    decay geometrically and the extrapolated remainder falls below ``tol``,
    and not tempered when the increments stop decaying.

    Returns
    -------
    TemperedReport
        ``evidence`` lists ``(radius, cumulative integral)``.

    Raises
    ------
    Inconclusive
        If neither verdict is reached by ``max_radius``.
    """
    if S.domain.is_torus:
        mass = S.total_mass()
        return TemperedReport(bool(np.isfinite(mass)), [(np.pi, mass)], 0.0)
    d = S.d
    loc = S.atom_locations
    radii = np.max(np.abs(loc), axis=1) if len(loc) else np.zeros(0)
    kw = S.atom_weights * kappa(loc, S.domain) if len(loc) else np.zeros(0)
    panels = 32 if d == 1 else 6
    total = float(np.sum(kw[radii < r0]))
    if not S.density.is_zero:
        total += _shell_density_mass(S.density, d, 0.0, r0, panels)
    evidence = [(r0, total)]
    increments = []
    r = r0
    ratio = float("nan")
    while r < max_radius:
        inc = float(np.sum(kw[(radii >= r) & (radii < 2 * r)]))
        if not S.density.is_zero:
            inc += _shell_density_mass(S.density, d, r, 2 * r, panels)
        r *= 2
        total += inc
        increments.append(inc)
        evidence.append((r, total))
        if len(increments) >= 4:
            last = np.array(increments[-4:])
            remaining = bool(np.any(radii >= r)) or not S.density.is_zero
            if np.all(last == 0) and not remaining:
                return TemperedReport(True, evidence, 0.0)
            if np.all(last[:-1] > 0):
                ratios = last[1:] / last[:-1]
                ratio = float(ratios[-1])
                if np.all(ratios < 0.9):
                    if last[-1] * ratio / (1 - ratio) < tol:
                        return TemperedReport(True, evidence, ratio)
                elif np.all(ratios >= 0.95):
                    return TemperedReport(False, evidence, ratio)
    raise Inconclusive(f"kappa-weighted increments undecided up to radius {max_radius:g}")


@dataclass(frozen=True)
class SymmetryReport:
    symmetric: bool
    max_atom_defect: float
    max_density_defect: float

    def __bool__(self):
        return self.symmetric


def check_symmetry(S, tol=1e-9, n_samples=512, extent=None, seed=0):
    """Check ``S(-A) = S(A)`` on the atoms and on sampled density values."""
    loc, w = S.atom_locations, S.atom_weights
    atom_defect = 0.0
    if len(loc):
        refl = -loc
        if S.domain.is_torus:
            refl = wrap_angle(refl)
        for x, a in zip(refl, w):
            dist = np.max(np.abs(loc - x), axis=1)
            if S.domain.is_torus:
                dist = np.max(np.abs(wrap_angle(loc - x)), axis=1)
            match = w[dist <= 1e-9].sum()
            atom_defect = max(atom_defect, abs(match - a))
    dens_defect = 0.0
    if not S.density.is_zero:
        rng = np.random.default_rng(seed)
        if extent is None:
            extent = np.pi if S.domain.is_torus else 50.0
        u = rng.uniform(-extent, extent, size=(n_samples, S.d))
        a, b = S.density(u), S.density(-u)
        dens_defect = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))
    ok = atom_defect <= tol * max(1.0, np.max(w, initial=0.0)) and dens_defect <= tol
    return SymmetryReport(bool(ok), float(atom_defect), dens_defect)


@dataclass(frozen=True)
class GapRegion:
    """Axis-aligned box ``[lo, hi]`` on which ``S`` is (numerically) null."""

    lo: np.ndarray
    hi: np.ndarray

    @property
    def side(self):
        return float(np.min(self.hi - self.lo))

    @property
    def center(self):
        return (self.lo + self.hi) / 2

    def to_dict(self):
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}


def _free_mask(S, axes, floor):
    d = S.d
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    shape = grid.shape[:-1]
    pts = grid.reshape(-1, d)
    free = S.density(pts) < floor
    free = free.reshape(shape)
    # block the grid nodes nearest each atom and their neighbours
    if S.n_atoms:
        steps = np.array([a[1] - a[0] for a in axes])
        origin = np.array([a[0] for a in axes])
        idx = np.floor((S.atom_locations - origin) / steps).astype(int)
        for base in idx:
            for off in np.ndindex(*([2] * d)):
                j = base + np.array(off)
                if np.all(j >= 0) and np.all(j < np.array(shape)):
                    free[tuple(j)] = False
    return free


def spectral_gap_search(S, resolution=0.01, floor=1e-12, extent=None):
    """Largest axis-aligned cube on which the density is below ``floor``.

    Parameters
    ----------
    S : SpectralMeasure
    resolution : float
        Grid step; boxes shorter than this are not reported.
    floor : float
        Density threshold counted as zero.
    extent : float, optional
        Half-width of the search window on R^d; the torus is searched
        whole. Defaults to ``max(4 pi, 1.5 max |atom|)`` capped at 64.

    Returns
    -------
    GapRegion or None
    """
    resolution = check_positive(resolution, "resolution")
    d = S.d
    if S.domain.is_torus:
        lo, hi = -np.pi, np.pi
    else:
        if extent is None:
            far = float(np.max(np.abs(S.atom_locations), initial=0.0))
            extent = min(64.0, max(4 * np.pi, 1.5 * far))
        lo, hi = -extent, extent
    n = int(np.floor((hi - lo) / resolution)) + 1
    if d > 1:
        n = min(n, int(round(4_000_000 ** (1 / d))))
    axis = np.linspace(lo, hi, n)
    step = axis[1] - axis[0]
    free = _free_mask(S, [axis] * d, floor)
    if d == 1:
        best, start, best_run = None, None, 0
        for i, ok in enumerate(np.append(free, False)):
            if ok and start is None:
                start = i
            elif not ok and start is not None:
                if i - start > best_run:
                    best_run, best = i - start, (start, i - 1)
                start = None
        if best is None or (best[1] - best[0]) * step < resolution - 1e-12:
            return None
        return GapRegion(np.array([axis[best[0]]]), np.array([axis[best[1]]]))
    # chessboard distance to the nearest blocked node bounds the cube half-side
    padded = np.pad(free, 1, constant_values=False)
    dist = ndimage.distance_transform_cdt(padded, metric="chessboard")[(slice(1, -1),) * d]
    k = int(dist.max())
    if k < 1:
        return None
    half = k - 1
    if 2 * half * step < resolution - 1e-12:
        return None
    where = np.unravel_index(int(np.argmax(dist)), dist.shape)
    c = np.array([axis[i] for i in where])
    return GapRegion(c - half * step, c + half * step)


@dataclass(frozen=True)
class DominationReport:
    dominated: bool
    max_violation: float
    max_ratio: float

    def __bool__(self):
        return self.dominated


def _factor_atom_weight(factor, x, tol=1e-9):
    if factor.n_atoms == 0:
        return 0.0
    dist = np.abs(factor.atom_locations[:, 0] - x)
    if factor.domain.is_torus:
        dist = np.abs(wrap_angle(factor.atom_locations[:, 0] - x))
    return float(factor.atom_weights[dist <= tol].sum())


def tensor_domination_check(S, factors, n_grid=101, extent=None, rtol=1e-12):
    """Check ``S <= S_1 x ... x S_d`` on a grid and on the atoms of ``S``.

    Parameters
    ----------
    S : SpectralMeasure
        Measure in dimension d.
    factors : list of SpectralMeasure
        d one-dimensional measures.
    n_grid : int
        Grid points per axis.
    extent : float, optional
        Half-width of the grid on R^d (pi on the torus).

    Returns
    -------
    DominationReport
        ``max_violation`` is ``max(s - prod s_i)``; ``max_ratio`` is the
        largest ``s / prod s_i`` (and atom-weight ratio) observed.
    """
    d = S.d
    if len(factors) != d:
        raise ValueError(f"need {d} factors, got {len(factors)}")
    if extent is None:
        extent = np.pi if S.domain.is_torus else 20.0
    axis = np.linspace(-extent, extent, n_grid, endpoint=not S.domain.is_torus)
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    violation, ratio = 0.0, 0.0
    if not S.density.is_zero:
        s = S.density(grid)
        prod = np.ones(len(grid))
        for l, fac in enumerate(factors):
            prod *= fac.density(grid[:, l:l + 1])
        excess = s - prod
        violation = max(violation, float(np.max(excess)))
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(prod > 0, s / prod, np.where(s > 0, np.inf, 0.0))
        ratio = max(ratio, float(np.max(r)))
    for x, a in zip(S.atom_locations, S.atom_weights):
        bound = np.prod([_factor_atom_weight(fac, x[l]) for l, fac in enumerate(factors)])
        violation = max(violation, a - bound)
        if a > 0:
            ratio = max(ratio, a / bound if bound > 0 else np.inf)
    scale = max(1.0, ratio if np.isfinite(ratio) else 1.0)
    ok = violation <= rtol * scale
    return DominationReport(bool(ok), float(max(violation, 0.0)), float(ratio))
