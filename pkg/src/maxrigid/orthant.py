"""Orthant polynomial approximation error ``e_n(S)`` on the torus.

``e_n(S) = inf_P int |1 - P|^2 dS`` over polynomials ``P = sum h_m z^m``
whose frequencies lie in the orthant cube ``Q_n = {m : 1 <= s_l m_l <= n}``
for a sign pattern ``s``. For a stationary field on Z^d it is, up to the
factor ``(2 pi)^-d``, the error of predicting ``X_0`` from the sites of
``Q_n``. The ``half_space`` index set replaces the cube by
``{1 <= s_1 m_1 <= n, |m_l| <= n for l >= 2}``.
"""

from dataclasses import dataclass, field
import itertools

import numpy as np
from scipy import linalg
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import Inconclusive
from .quadrature import QuadratureSpec

__all__ = [
    "index_set",
    "orthant_error_en",
    "toeplitz_error_en",
    "EnCurve",
    "en_curve",
    "StrongInterpolability",
    "strong_interpolability_check",
    "OrthantApproximator",
    "all_orthants",
]


def all_orthants(d):
    return [tuple(s) for s in itertools.product((1, -1), repeat=d)]


def index_set(n, d, orthant=None, kind="orthant"):
    """Frequencies ``m`` of the polynomials allowed at order ``n``."""
    signs = np.ones(d) if orthant is None else np.asarray(orthant, dtype=float)
    if kind == "orthant":
        axes = [s * np.arange(1, n + 1) for s in signs]
    elif kind == "half_space":
        axes = [signs[0] * np.arange(1, n + 1)] + [np.arange(-n, n + 1)] * (d - 1)
    else:
        raise ValueError(f"unknown index set {kind!r}")
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d).astype(float)


def _nodes_and_weights(S, n, density_points):
    loc = S.atom_locations
    w = S.atom_weights
    if S.density.is_zero:
        return loc, w
    m = density_points or max(64, 4 * n + 32)
    theta = -np.pi + 2 * np.pi * np.arange(m) / m
    grid = np.stack(np.meshgrid(*([theta] * S.d), indexing="ij"), axis=-1).reshape(-1, S.d)
    # trapezoid pseudo-atoms: exact for trigonometric integrands of degree < m
    gw = S.density(grid) * (2 * np.pi / m) ** S.d
    return np.concatenate([loc, grid]), np.concatenate([w, gw])


def _lstsq_error(nodes, weights, freqs):
    keep = weights > 0
    nodes, weights = nodes[keep], weights[keep]
    if len(weights) == 0:
        return 0.0, np.zeros(len(freqs), dtype=complex)
    sw = np.sqrt(weights)
    A = np.exp(1j * nodes @ freqs.T) * sw[:, None]
    coef, *_ = linalg.lstsq(A, sw.astype(complex), lapack_driver="gelsd")
    resid = sw - A @ coef
    return float(np.vdot(resid, resid).real), coef


def orthant_error_en(S, n, orthant=None, kind="orthant", density_points=None, return_coef=False):
    """Least-squares value of ``e_n(S)``.

    Parameters
    ----------
    S : SpectralMeasure
        Finite measure on the torus.
    n : int
        Order of the cube ``Q_n``.
    orthant : tuple of +-1, optional
        Sign pattern; the positive orthant by default.
    kind : {"orthant", "half_space"}
    density_points : int, optional
        Trapezoid points per axis for the density part.
    return_coef : bool
        Also return the optimal coefficients ``h_m``.

    Returns
    -------
    float, or (float, ndarray, ndarray)
        ``e_n``, and with ``return_coef`` the coefficients and frequencies.

    Notes
    -----
    Rank-deficient problems take the minimal-norm solution; the
    minimum value is attained either way.
    """
    if not S.domain.is_torus:
        raise ValueError("e_n is defined for measures on the torus")
    if n < 1:
        raise ValueError("n must be a positive integer")
    freqs = index_set(n, S.d, orthant, kind)
    nodes, weights = _nodes_and_weights(S, n, density_points)
    err, coef = _lstsq_error(nodes, weights, freqs)
    if return_coef:
        return err, coef, freqs
    return err


def _moments(S, n, density_points=None):
    # c_j = int exp(i j theta) dS for j = 0..n
    nodes, weights = _nodes_and_weights(S, n, density_points)
    j = np.arange(n + 1)
    return (weights[None, :] * np.exp(1j * np.outer(j, nodes[:, 0]))).sum(axis=1)


def toeplitz_error_en(S, n, density_points=None):
    """``e_n`` in dimension one from the Toeplitz moment system (Levinson).

    Independent of :func:`orthant_error_en`: the normal equations
    ``sum_m c_{m-k} h_m = c_{-k}`` are solved with ``scipy.linalg.solve_toeplitz``.
    """
    if S.d != 1:
        raise ValueError("the Toeplitz route is one-dimensional")
    c = _moments(S, n, density_points)
    col = np.conj(c[:n])          # T[k, 0] = c_{-k}
    row = c[:n]                   # T[0, m] = c_m
    b = np.conj(c[1:n + 1])       # b_k = c_{-k}, k = 1..n
    # shift: unknowns h_1..h_n pair with frequencies 1..n, so T[k, m] = c_{m-k}
    try:
        h = linalg.solve_toeplitz((col, row), b)
    except (linalg.LinAlgError, np.linalg.LinAlgError):
        return orthant_error_en(S, n, density_points=density_points)
    return float(np.real(c[0] - np.vdot(h, b)))


@dataclass
class EnCurve:
    n_values: list
    errors: list
    orthant: tuple
    kind: str = "orthant"
    measure_id: str | None = None

    def to_dict(self):
        return {"n": list(self.n_values), "e_n": list(self.errors), "orthant": list(self.orthant),
                "kind": self.kind, "measure": self.measure_id}


def en_curve(S, n_values, orthant=None, kind="orthant", density_points=None):
    """``e_n`` along ``n_values`` with the running minimum enforced.

    The index sets are nested, so the exact curve is nonincreasing;
    the running minimum removes least-squares rounding.
    """
    ns = sorted(int(n) for n in n_values)
    raw = [orthant_error_en(S, n, orthant, kind, density_points) for n in ns]
    errs = np.minimum.accumulate(np.maximum(raw, 0.0)).tolist()
    o = tuple(orthant) if orthant is not None else (1,) * S.d
    return EnCurve(ns, errs, o, kind, S.tag)


@dataclass
class StrongInterpolability:
    strong: bool
    rate: float | None
    curves: list = field(repr=False, default_factory=list)
    reason: str = ""


def _classify_curve(errs, mass, exact_tol, plateau_tol):
    e = np.asarray(errs)
    if e[-1] <= exact_tol * max(mass, 1e-300):
        return True, 0.0, "exact annihilation"
    pos = e > exact_tol * max(mass, 1e-300)
    n = np.arange(1, len(e) + 1)[pos]
    y = np.log(e[pos])
    tail = slice(len(y) // 2, None)
    slope, icpt = np.polyfit(n[tail], y[tail], 1)
    rate = float(np.exp(slope))
    resid = float(np.max(np.abs(y[tail] - (slope * n[tail] + icpt))))
    if abs(e[-1] - e[-2]) <= plateau_tol * e[-2] and e[-1] > plateau_tol * mass:
        return False, rate, "plateau"
    if rate < 0.9 and resid < 1.0:
        return True, rate, "geometric decay"
    raise Inconclusive(f"e_n decays sub-geometrically (fitted rate {rate:.3f}, residual {resid:.2f})")


def strong_interpolability_check(S, n_max=20, d=None, orthants=None, exact_tol=1e-13, plateau_tol=0.01):
    """Decide strong interpolability from the decay of ``e_n`` in every orthant.

    Returns
    -------
    StrongInterpolability
        ``strong`` when every orthant curve decays geometrically or hits
        zero; ``rate`` is the worst fitted ratio ``e_{n+1} / e_n``.

    Raises
    ------
    Inconclusive
        For curves that decay but not geometrically.
    """
    if n_max < 8:
        raise ValueError("n_max must be at least 8")
    d = d or S.d
    orthants = orthants or all_orthants(d)
    mass = S.total_mass()
    curves, rates, reasons, strong = [], [], [], True
    for o in orthants:
        curve = en_curve(S, range(1, n_max + 1), o)
        curves.append(curve)
        ok, rate, why = _classify_curve(curve.errors, mass, exact_tol, plateau_tol)
        strong &= ok
        rates.append(rate)
        reasons.append(why)
    return StrongInterpolability(bool(strong), float(max(rates)), curves, "; ".join(sorted(set(reasons))))


class OrthantApproximator(BaseEstimator):
    """Least-squares orthant polynomial fitted to a weighted point cloud on the torus.

    Parameters
    ----------
    n : int
        Order of the frequency cube.
    orthant : tuple of +-1, optional
    kind : {"orthant", "half_space"}

    Attributes
    ----------
    coef_ : ndarray
        Coefficients ``h_m``.
    freqs_ : ndarray
        Frequencies ``m``.
    error_ : float
        ``sum_j w_j |1 - P(theta_j)|^2``.
    """

    def __init__(self, n=1, orthant=None, kind="orthant"):
        self.n = n
        self.orthant = orthant
        self.kind = kind

    def fit(self, X, y=None, sample_weight=None):
        """Fit to angles ``X`` of shape (m, d) with weights ``sample_weight``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] == 1 and X.shape[1] > 1 and sample_weight is not None and len(sample_weight) == X.shape[1]:
            X = X.T
        w = np.ones(len(X)) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        self.freqs_ = index_set(self.n, X.shape[1], self.orthant, self.kind)
        self.error_, self.coef_ = _lstsq_error(X, w, self.freqs_)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        """Values of ``P(e^{i theta})`` at angles ``X``."""
        check_is_fitted(self, "coef_")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.exp(1j * X @ self.freqs_.T) @ self.coef_
