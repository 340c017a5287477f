"""Numerical verdict on the divergence of the kappa-weighted log integral.

For a one-dimensional density ``s`` the quantity

    D(M) = -int max(ln s(u), -M) kappa(u) du

is finite for every cutoff ``M`` and increases to ``-int ln(s) kappa``.
Near a zero with ``s ~ exp(-c |u|^-beta)`` the increments
``D(2M) - D(M)`` scale like ``M^(1 - 1/beta)``, so the slope ``sigma`` of
log-increments against ``log M`` estimates ``beta = 1 / (1 - sigma)``.
The integral diverges exactly when ``beta >= 1`` (``e^{-1/|u|}`` is the
borderline divergent case, ``e^{-1/sqrt|u|}`` converges). An interval
where ``s`` vanishes is a gap, and gives ``D(M)`` linear in ``M``.
"""

from dataclasses import dataclass
import warnings

import numpy as np
from scipy import integrate as sp_integrate

from .exceptions import Inconclusive
from .functionals import DomainTag
from .spectral import CustomDensity, Density, SpectralMeasure, spectral_gap_search

__all__ = ["SzegoVerdict", "log_integral_verdict", "truncated_log_integral"]

DEFAULT_CUTOFFS = tuple(2.0 ** j for j in range(3, 15))


@dataclass(frozen=True)
class SzegoVerdict:
    """Outcome of the log-integral classifier.

    Attributes
    ----------
    divergent : bool
    evidence : list of (M, value)
        Truncated integrals ``int max(ln s, -M) kappa``, nonincreasing in M.
    classification : str
        ``"gap"``, ``"deep_zero"`` or ``"regular"``.
    order : float or None
        Fitted zero depth ``beta`` for ``"deep_zero"``; ``inf`` for a gap.
    slope : float or None
        Fitted growth exponent of the increments.
    """

    divergent: bool
    evidence: list
    classification: str
    order: float | None = None
    slope: float | None = None


def _as_density(s):
    if isinstance(s, Density):
        return s
    return CustomDensity(lambda u: s(u[:, 0]), 1)


def _zero_candidates(density, domain, extent, limit=16):
    pts = set(float(p) for p in density.breakpoints)
    grid = np.linspace(-extent, extent, 40001)
    vals = density.log(grid[:, None])
    finite = np.isfinite(vals)
    base = np.median(vals[finite]) if finite.any() else 0.0
    inner = vals[1:-1]
    strict = (inner < vals[:-2]) & (inner <= vals[2:]) & (inner < base + np.log(1e-3))
    cand = grid[1:-1][strict]
    cand = cand[np.argsort(inner[strict])][:limit]
    pts.update(cand.tolist())
    # edges of exact-zero runs
    zero = ~finite
    edges = np.flatnonzero(np.diff(zero.astype(int)))
    pts.update(grid[edges].tolist())
    pts.update(grid[edges + 1].tolist())
    return sorted(p for p in pts if -extent < p < extent)


def _refined_edges(lo, hi, points, refine=True):
    # geometric edges towards every zero candidate resolve the cutoff region
    edges = {lo, hi}
    for p in points:
        edges.add(p)
        for j in range(0, 40 if refine else 0):
            step = 10.0 ** (-j / 3)
            edges.update((p - step, p + step))
    return np.array(sorted(e for e in edges if lo <= e <= hi))


def truncated_log_integral(s, domain, M, points=(), refine=True):
    """``int max(ln s(u), -M) kappa(u) du`` over the dual line or circle."""
    density = _as_density(s)

    def log_trunc(u):
        return np.maximum(density.log(np.atleast_1d(u)[:, None]), -M)

    if domain.is_torus:
        f = lambda x: float(log_trunc(x)[0])
        edges = _refined_edges(-np.pi, np.pi, [p for p in points if -np.pi < p < np.pi], refine)
    else:
        # u = v / (1 - |v|) maps (-1, 1) onto R with kappa(u) du = dv
        def f(v):
            return float(log_trunc(v / (1.0 - abs(v)))[0])

        vpts = [p / (1.0 + abs(p)) for p in points]
        edges = _refined_edges(-1.0, 1.0, vpts, refine)
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sp_integrate.IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            total += sp_integrate.quad(f, lo, hi, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
    return total


def log_integral_verdict(s, domain=None, cutoffs=DEFAULT_CUTOFFS, tol=0.05, gap_resolution=1e-3, extent=50.0):
    """Classify whether ``int ln(s) kappa = -infinity`` for a 1-D density.

    Parameters
    ----------
    s : Density or callable
        Nonnegative density on the dual line (or circle).
    domain : DomainTag, optional
        One-dimensional domain; continuous by default.
    cutoffs : sequence of float
        Increasing truncation levels ``M``.
    tol : float
        Half-width, in the fitted order ``beta``, of the band below the
        divergence boundary ``beta = 1`` that is reported as Inconclusive.
    gap_resolution : float
        Grid step of the preliminary gap search.
    extent : float
        Half-width of the window scanned for gaps and zeros on R.

    Returns
    -------
    SzegoVerdict

    Raises
    ------
    Inconclusive
        When the fitted order falls in ``(1 - 3 tol, 1 - tol]``.
    """
    domain = domain or DomainTag.continuous(1)
    if domain.d != 1:
        raise ValueError("the log-integral verdict is one-dimensional; apply it per factor")
    density = _as_density(s)
    cutoffs = np.asarray(sorted(cutoffs), dtype=float)
    window = np.pi if domain.is_torus else extent
    points = _zero_candidates(density, domain, window)

    # exact zeros only: deep zeros underflow in s but not in ln s
    support = CustomDensity(lambda u: np.where(np.isneginf(density.log(u)), 0.0, 1.0), 1)
    gap = spectral_gap_search(SpectralMeasure(domain, support), resolution=gap_resolution, floor=0.5,
                              extent=None if domain.is_torus else extent)
    evidence = [(float(M), truncated_log_integral(density, domain, M, points, refine=gap is None)) for M in cutoffs]
    values = np.minimum.accumulate(np.array([v for _, v in evidence]))
    evidence = [(M, float(v)) for (M, _), v in zip(evidence, values)]
    if gap is not None:
        return SzegoVerdict(True, evidence, "gap", float("inf"), 1.0)

    inc = -np.diff(values)
    scale = max(1.0, float(np.abs(values).max()))
    if np.all(inc[-4:] <= 1e-10 * scale):
        return SzegoVerdict(False, evidence, "regular", None, None)
    use = inc[-6:]
    Ms = cutoffs[1:][-6:]
    if np.any(use <= 0):
        # increments vanish intermittently: quadrature noise on a converged integral
        return SzegoVerdict(False, evidence, "regular", None, None)
    slope = float(np.polyfit(np.log(Ms), np.log(use), 1)[0])
    order = float("inf") if slope >= 1.0 else 1.0 / (1.0 - slope)
    if order > 1.0 - tol:
        return SzegoVerdict(True, evidence, "deep_zero", order, slope)
    if order > 1.0 - 3 * tol:
        raise Inconclusive(f"fitted zero order {order:.3f} is within the boundary band of 1")
    return SzegoVerdict(False, evidence, "deep_zero", order, slope)
