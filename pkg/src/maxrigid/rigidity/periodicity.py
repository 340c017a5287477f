"""Shell-by-shell propagation of integer-valued fields and period detection.

A window is an array of side ``L`` in each axis with centre ``c = L // 2``;
the cube ``C_n`` is ``{k : -n <= k - c < n}`` and the shell ``D_n`` is
``C_{n+1} \\ C_n``. Each shell site is predicted linearly from a sub-cube
of ``C_n`` lying on the inner side of the site, and the prediction is
rounded to the nearest admissible value. Iterating from ``C_{n0}``
reconstructs the whole window when the spectrum allows exact orthant
interpolation.
"""

from dataclasses import dataclass, field
import itertools
import json

import numpy as np

from ..spectral import SpectralMeasure
from ..functionals import DomainTag
from ..orthant import _nodes_and_weights, _lstsq_error

__all__ = [
    "PeriodicityReport",
    "ShellResult",
    "ValueSet",
    "PredictorTable",
    "propagate_step",
    "propagate",
    "find_period",
    "detect_period",
    "periodic_pattern_spectrum",
    "random_translate",
]


class ValueSet:
    """Finite set ``U`` of admissible values with separation ``delta_U``."""

    def __init__(self, values):
        v = np.unique(np.asarray(values, dtype=float))
        if v.size == 0:
            raise ValueError("value set is empty")
        self.values = v
        self.delta = float(np.min(np.diff(v))) if v.size > 1 else np.inf

    def round(self, z):
        """Nearest element of ``U``; ties go to the smaller element."""
        z = np.asarray(z, dtype=float)
        idx = np.clip(np.searchsorted(self.values, z), 1, max(len(self.values) - 1, 1))
        if len(self.values) == 1:
            return np.full(z.shape, self.values[0]), np.abs(z - self.values[0])
        lo, hi = self.values[idx - 1], self.values[idx]
        pick = np.where(z - lo <= hi - z, lo, hi)
        return pick, np.abs(z - pick)


class PredictorTable:
    """Linear predictors of ``X_k`` from ``X_{k+o}`` for offset patterns.

    Predictors depend only on the direction signs and on which coordinates
    lie on the shell boundary, so they are computed once per pattern and
    sub-cube size and shared across sites.
    """

    def __init__(self, S, cap=8, density_points=None):
        if not S.domain.is_torus:
            raise ValueError("periodicity works with spectra on the torus")
        self.S = S
        self.cap = int(cap)
        self.density_points = density_points
        self._cache = {}

    def offsets(self, sigma, boundary, s):
        ranges = [range(1 if b else 0, s + 1) for b in boundary]
        js = np.array([j for j in itertools.product(*ranges) if any(j)], dtype=float)
        return js * np.asarray(sigma, dtype=float)

    def get(self, sigma, boundary, s):
        key = (tuple(sigma), tuple(boundary), s)
        if key not in self._cache:
            offs = self.offsets(sigma, boundary, s)
            nodes, weights = _nodes_and_weights(self.S, 2 * s, self.density_points)
            err, coef = _lstsq_error(nodes, weights, offs)
            mass = float(np.sum(weights))
            self._cache[key] = (offs.astype(int), coef.real, err / mass if mass > 0 else 0.0)
        return self._cache[key]


@dataclass
class ShellResult:
    """Propagated values on one shell, in site order."""

    sites: np.ndarray
    values: np.ndarray
    residuals: np.ndarray
    failures: np.ndarray

    @property
    def n_failures(self):
        return int(self.failures.sum())


def _shell_sites(n, d):
    rng = np.arange(-n - 1, n + 1)
    grid = np.stack(np.meshgrid(*([rng] * d), indexing="ij"), axis=-1).reshape(-1, d)
    on = np.any((grid == -n - 1) | (grid == n), axis=1)
    return grid[on]


def propagate_step(window, n, U, predictors):
    """Predict the shell ``D_n`` from the values already on ``C_n``.

    Parameters
    ----------
    window : ndarray
        Field on the full window; only entries inside ``C_n`` are read.
    n : int
    U : ValueSet or array_like
    predictors : PredictorTable

    Returns
    -------
    ShellResult
        ``failures`` flags sites whose pre-rounding residual exceeds
        ``delta_U / 2``.
    """
    U = U if isinstance(U, ValueSet) else ValueSet(U)
    window = np.asarray(window, dtype=float)
    d = window.ndim
    c = window.shape[0] // 2
    s = min(n, predictors.cap)
    sites = _shell_sites(n, d)
    raw = np.empty(len(sites))
    for i, r in enumerate(sites):
        boundary = (r == -n - 1) | (r == n)
        sigma = np.where(r < 0, 1, -1)
        offs, coef, _ = predictors.get(tuple(sigma), tuple(boundary), s)
        idx = tuple((c + r + offs).T)
        raw[i] = coef @ window[idx]
    values, resid = U.round(raw)
    return ShellResult(sites, values, resid, resid > U.delta / 2)


def propagate(window, U, S, n0=5, cap=8, density_points=None):
    """Rebuild the window from ``C_{n0}`` alone; return the field and per-shell results."""
    window = np.asarray(window, dtype=float)
    L = window.shape[0]
    if any(side != L for side in window.shape):
        raise ValueError("window must be a cube")
    N = L // 2
    c = L // 2
    table = PredictorTable(S, cap, density_points)
    field_ = np.full(window.shape, np.nan)
    core = tuple(slice(c - n0, c + n0) for _ in range(window.ndim))
    field_[core] = window[core]
    shells = []
    for n in range(n0, N):
        res = propagate_step(field_, n, U, table)
        field_[tuple((c + res.sites).T)] = res.values
        shells.append(res)
    return field_, shells


def find_period(window, max_period=None):
    """Smallest axis periods ``p_l <= L/2`` with ``x_{m + p_l e_l} = x_m``, or None."""
    window = np.asarray(window)
    periods = []
    for axis, L in enumerate(window.shape):
        limit = max_period or L // 2
        for p in range(1, limit + 1):
            a = np.take(window, np.arange(p, L), axis=axis)
            b = np.take(window, np.arange(0, L - p), axis=axis)
            if np.array_equal(a, b):
                periods.append(p)
                break
        else:
            return None
    return tuple(periods)


@dataclass
class PeriodicityReport:
    """Outcome of a period-recovery run.

    Attributes
    ----------
    period : tuple of int or None
        Minimal axis periods of the propagated window when it reproduces
        the observed one.
    propagation_failures : int
        Shell sites flagged by rounding or disagreeing with the observed value.
    window : tuple of int
    values : ndarray
    delta_U : float
    n0 : int
    shell_failures : list of int
    """

    period: tuple
    propagation_failures: int
    window: tuple
    values: np.ndarray = field(repr=False)
    delta_U: float = 1.0
    n0: int = 5
    shell_failures: list = field(default_factory=list)
    observed_period: tuple = None

    def to_dict(self):
        return {
            "period": None if self.period is None else list(self.period),
            "observed_period": None if self.observed_period is None else list(self.observed_period),
            "propagation_failures": self.propagation_failures,
            "window": list(self.window),
            "values": self.values.tolist(),
            "delta_U": self.delta_U,
            "n0": self.n0,
            "shell_failures": list(self.shell_failures),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def detect_period(sample, U, S, n0=5, cap=8, density_points=None):
    """Propagate from ``C_{n0}``, check against ``sample`` and read off the period.

    Parameters
    ----------
    sample : ndarray
        Observed cube window of side ``L >= 8 n0``.
    U : array_like
        Admissible values.
    S : SpectralMeasure
        Spectrum used to build the predictors.
    n0 : int

    Returns
    -------
    PeriodicityReport
    """
    sample = np.asarray(sample, dtype=float)
    L = sample.shape[0]
    if L // 2 < 4 * n0:
        raise ValueError(f"window side {L} too small for n0={n0}; need at least {8 * n0}")
    U = ValueSet(U)
    rebuilt, shells = propagate(sample, U, S, n0, cap, density_points)
    c = L // 2
    total = 0
    per_shell = []
    for res in shells:
        mismatch = rebuilt[tuple((c + res.sites).T)] != sample[tuple((c + res.sites).T)]
        k = int(np.sum(res.failures | mismatch))
        per_shell.append(k)
        total += k
    period = find_period(rebuilt) if total == 0 else None
    return PeriodicityReport(period, total, sample.shape, U.values, U.delta, n0, per_shell,
                             find_period(sample))


def periodic_pattern_spectrum(pattern):
    """Spectral measure of a uniformly random translate of a periodic pattern.

    The pattern is one period box; atoms sit at ``2 pi p / N`` with weights
    ``(2 pi)^d |x_hat(p)|^2 / |N|^2``, including the mean (zero frequency).
    """
    x = np.asarray(pattern, dtype=float)
    d = x.ndim
    shape = np.array(x.shape)
    xh = np.fft.fftn(x)
    w = (2 * np.pi) ** d * np.abs(xh) ** 2 / np.prod(shape) ** 2
    p = np.stack(np.meshgrid(*[np.arange(m) for m in shape], indexing="ij"), axis=-1).reshape(-1, d)
    loc = 2 * np.pi * p / shape
    return SpectralMeasure.atomic(DomainTag.discrete(d), loc, w.reshape(-1), tag="periodic-pattern")


def random_translate(pattern, side, rng):
    """Window of side ``side`` cut from the periodic extension at a random shift."""
    x = np.asarray(pattern)
    shift = [rng.integers(m) for m in x.shape]
    idx = np.ix_(*[(np.arange(side) + s) % m for s, m in zip(shift, x.shape)])
    return x[idx]
