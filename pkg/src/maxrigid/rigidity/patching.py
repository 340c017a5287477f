"""Polynomial approximation of ``gamma_1(u) gamma_2(v)`` on a non simply connected set.

The set ``S`` on the 2-torus removes a notch around ``u = 0`` and, in ``v``,
a notch around 0 over the arc ``J_0``, around ``pi`` over ``J_pi`` and both
in between. One-dimensional analytic approximants of ``gamma_2`` on the two
notched circles are blended by a trigonometric polynomial ``phi_0`` close
to the ramp ``r`` (1 on ``J_0``, 0 on ``J_pi``, linear between) on the
two arcs:

    H(u, v) = h_1(u) (h_2^0(v) phi_0(u) + h_2^pi(v) (1 - phi_0(u))).

Over ``J_0`` the factor ``1 - phi_0`` multiplies ``h_2^pi(v)`` at every
``v`` off the notch at 0, including near ``pi`` where ``h_2^pi`` may be
very large; the blend tolerance is therefore ``eps`` divided by the full
sup norms of ``h_2^0, h_2^pi``. With that choice every term is controlled
by ``eps`` and the total error is at most ``4 eps`` on ``S``.
"""

from dataclasses import dataclass, field
import json

import numpy as np

from .._validation import check_rng, wrap_angle
from ..exceptions import ApproximantFailure
from .gap_polynomial import _lawson, counterexample_set

__all__ = ["PatchPolynomial", "patch_polynomial", "analytic_approximant", "ramp", "ramp_approximant",
           "sample_counterexample_set"]

ETA = 1 / 100
ARC = np.pi / 3


def ramp(u):
    """1 on ``|u| <= pi/3``, 0 on ``|u - pi| <= pi/3``, linear in between."""
    a = np.abs(wrap_angle(u))
    return np.clip((2 * ARC - a) / ARC, 0.0, 1.0)


def _degrees(k_max):
    ks = [0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256]
    return [k for k in ks if k < k_max] + [k_max]


def analytic_approximant(gamma, center, eps, eta=ETA, k_max=64, n_points=1000, iters=300):
    """Coefficients ``c_0..c_k`` with ``|gamma - sum c_m z^m| < eps`` off the notch at ``center``.

    Raises
    ------
    ApproximantFailure
        If no degree up to ``k_max`` reaches ``eps`` on the sample.
    """
    length = 2 * np.pi - 2 * eta
    t = wrap_angle(center + eta + length * (np.arange(n_points) + 0.5) / n_points)
    g = np.asarray(gamma(t), dtype=complex)
    best = np.inf
    for k in _degrees(k_max):
        A = np.exp(1j * np.outer(t, np.arange(k + 1)))
        mx, coef, _ = _lawson(A, iters, target=g, stop_below=eps)
        best = min(best, mx)
        if mx < eps:
            return coef
    raise ApproximantFailure(
        f"analytic degree <= {k_max} misses eps={eps:g} off the notch at {center:g} (best {best:.3g})")


def ramp_approximant(tol, k_max=400, n_points=2000, iters=200, middle_bound=2.0):
    """Cosine coefficients of ``phi_0`` with ``|phi_0 - r| < tol`` on ``J_0`` and ``J_pi``.

    Between the arcs only ``|phi_0|, |1 - phi_0| <= middle_bound`` is
    required, so the degree grows like ``log(1 / tol)``.
    """
    half = n_points // 2
    t = np.concatenate([ARC * (2 * np.arange(half) / (half - 1) - 1),
                        np.pi + ARC * (2 * np.arange(half) / (half - 1) - 1)])
    r = ramp(t)
    mid = np.linspace(ARC, 2 * ARC, 400)
    best = np.inf
    for k in _degrees(k_max):
        A = np.cos(np.outer(t, np.arange(k + 1)))
        mx, coef, _ = _lawson(A, iters, target=r, stop_below=tol)
        best = min(best, mx)
        if mx < tol:
            phi = np.cos(np.outer(mid, np.arange(k + 1))) @ coef.real
            if np.abs(phi).max() <= middle_bound and np.abs(1 - phi).max() <= middle_bound:
                return coef.real
    raise ApproximantFailure(f"blend degree <= {k_max} misses tol={tol:.3g} on the arcs (best {best:.3g})")


def _poly(coef, t):
    return np.exp(1j * np.outer(t, np.arange(len(coef)))) @ coef


def sample_counterexample_set(n, eta=ETA, rng=0):
    """``n`` points drawn uniformly from the set by rejection."""
    rng = check_rng(rng)
    member = counterexample_set(eta)
    out = []
    while sum(len(o) for o in out) < n:
        pts = rng.uniform(-np.pi, np.pi, size=(2 * n, 2))
        out.append(pts[member(pts)])
    return np.concatenate(out)[:n]


@dataclass
class PatchPolynomial:
    """Patched approximant with its sampled error.

    Attributes
    ----------
    h1, h2_0, h2_pi : ndarray
        Analytic coefficients in ``z = e^{i theta}``.
    phi0 : ndarray
        Cosine coefficients of the blend.
    eps, eta : float
    error : float
        Max of ``|H - gamma_1 gamma_2|`` over the certification sample.
    bound : float
        ``4 eps``.
    norms : dict
        Sampled sup norms of the pieces, for the bound chain.
    """

    h1: np.ndarray
    h2_0: np.ndarray
    h2_pi: np.ndarray
    phi0: np.ndarray
    eps: float
    eta: float
    error: float
    bound: float
    n_sample: int
    norms: dict = field(default_factory=dict)

    def phi(self, u):
        return np.cos(np.outer(u, np.arange(len(self.phi0)))) @ self.phi0

    def __call__(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        p = self.phi(u)
        return _poly(self.h1, u) * (_poly(self.h2_0, v) * p + _poly(self.h2_pi, v) * (1 - p))

    @property
    def degree(self):
        return max(len(self.h1), len(self.h2_0), len(self.h2_pi), len(self.phi0)) - 1

    def to_dict(self):
        c = lambda a: [[float(z.real), float(z.imag)] for z in np.asarray(a, dtype=complex)]
        return {"h1": c(self.h1), "h2_0": c(self.h2_0), "h2_pi": c(self.h2_pi),
                "phi0": [float(x) for x in self.phi0], "eps": self.eps, "eta": self.eta,
                "error": self.error, "bound": self.bound, "n_sample": self.n_sample,
                "norms": self.norms}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def patch_polynomial(gamma1, gamma2, eps=0.01, eta=ETA, n_sample=2000, k_max=64, phi_k_max=400, rng=0):
    """Build ``H`` for ``gamma_1(u) gamma_2(v)`` and measure its error on the set.

    Parameters
    ----------
    gamma1, gamma2 : callable
        Vectorized functions of the angle with sup norm at most 1/4.
    eps : float
        Tolerance of every one-dimensional approximant.
    eta : float
        Notch half-width.
    n_sample : int
        Size of the random certification sample of the set.
    k_max, phi_k_max : int
        Degree caps of the analytic approximants and of the blend.

    Returns
    -------
    PatchPolynomial

    Raises
    ------
    ApproximantFailure
        If an analytic approximant or the ramp blend misses ``eps``.
    """
    h1 = analytic_approximant(gamma1, 0.0, eps, eta, k_max)
    h2_0 = analytic_approximant(gamma2, 0.0, eps, eta, k_max)
    h2_pi = analytic_approximant(gamma2, np.pi, eps, eta, k_max)
    t = np.linspace(-np.pi, np.pi, 8001)
    # the blend multiplies h_2^0 and h_2^pi over the whole circle, including
    # their own notches, so its tolerance is scaled by their full sup norms
    full = max(1.0, np.abs(_poly(h2_0, t)).max(), np.abs(_poly(h2_pi, t)).max())
    phi0 = ramp_approximant(eps / full, k_max=phi_k_max)
    pts = sample_counterexample_set(n_sample, eta, rng)
    H = PatchPolynomial(h1, h2_0, h2_pi, phi0, eps, eta, 0.0, 4 * eps, n_sample)
    u, v = pts[:, 0], pts[:, 1]
    err = np.abs(H(u, v) - np.asarray(gamma1(u), dtype=complex) * np.asarray(gamma2(v), dtype=complex))
    H.error = float(err.max())
    H.norms = {
        "h2_full": float(full),
        "gamma1": float(np.abs(gamma1(t)).max()),
        "gamma2": float(np.abs(gamma2(t)).max()),
        "h1": float(np.abs(_poly(h1, t[np.abs(t) > eta])).max()),
        "h2_0": float(np.abs(_poly(h2_0, t[np.abs(t) > eta])).max()),
        "h2_pi": float(np.abs(_poly(h2_pi, t[np.abs(wrap_angle(t - np.pi)) > eta])).max()),
        "phi0": float(np.abs(H.phi(t)).max()),
        "phi0_on_Jpi": float(np.abs(H.phi(t[np.abs(wrap_angle(t - np.pi)) <= ARC])).max()),
    }
    return H
