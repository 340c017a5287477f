"""Gap polynomials ``Q = 1 - sum_{m in Q_k} h_m z^m`` small on a spectral support.

If ``|Q| <= 1/2`` on the support of ``S`` then ``Q^n = 1 - P_n`` with
``P_n`` supported on ``Q_{kn}``, hence ``e_{kn}(S) <= int |Q|^(2n) dS <=
4^-n S(T^d)``. The coefficients are found by a discrete minimax fit
(Lawson's iteratively reweighted least squares) on a sample of the
support, with points where a denser sample violates the fit exchanged in;
the certificate adds a Taylor slack covering the gaps between samples.
"""

from dataclasses import dataclass, field
import itertools

import numpy as np
from scipy import linalg, signal

from .._validation import wrap_angle
from ..exceptions import NoCertificate
from ..orthant import index_set

__all__ = [
    "SupportSample",
    "GapPolynomial",
    "build_gap_polynomial",
    "tensor_gap_polynomial",
    "power_error_bound",
    "PowerBound",
    "arc_complement_sample",
    "counterexample_set",
    "sample_set",
    "certify",
]


@dataclass(frozen=True)
class SupportSample:
    """Sample of a support set with its covering radius.

    ``spacing`` bounds the sup-distance from any support point to the
    nearest sample; it is 0 when the support is the finite sample itself.
    """

    points: np.ndarray
    spacing: float = 0.0
    descriptor: dict = field(default_factory=dict)
    resample: object = field(default=None, repr=False, compare=False)

    def refined(self, factor):
        """Denser sample of the same set, or self for finite supports."""
        if self.resample is None or self.spacing == 0:
            return self
        return self.resample(factor)

    @property
    def d(self):
        return self.points.shape[1]


def arc_complement_sample(half_gap, n, center=0.0):
    """``n`` equispaced angles covering ``{|theta - center| >= half_gap}``."""
    length = 2 * np.pi - 2 * half_gap
    t = center + half_gap + length * (np.arange(n) + 0.5) / n
    return SupportSample(wrap_angle(t)[:, None], length / (2 * n),
                         {"kind": "arc_complement", "half_gap": half_gap, "center": center},
                         lambda f: arc_complement_sample(half_gap, int(n * f), center))


def _notch_free(theta, x, eta):
    return np.abs(wrap_angle(theta - x)) > eta


def counterexample_set(eta=0.01):
    """Membership test of the non simply connected set ``S`` on the 2-torus.

    ``S(u, v) = T^0(u) x {T^0(v) on J_0, T^pi(v) on J_pi, T^0(v) T^pi(v)
    elsewhere}``, where ``T^x`` is the circle minus a notch of half-width
    ``eta`` at ``x`` and ``J_0, J_pi`` are the arcs of half-width ``pi/3``
    around 0 and pi.
    """
    def member(points):
        u, v = points[:, 0], points[:, 1]
        in_j0 = np.abs(wrap_angle(u)) <= np.pi / 3
        in_jpi = np.abs(wrap_angle(u - np.pi)) <= np.pi / 3
        t0v, tpv = _notch_free(v, 0.0, eta), _notch_free(v, np.pi, eta)
        row = np.where(in_j0, t0v, np.where(in_jpi, tpv, t0v & tpv))
        return _notch_free(u, 0.0, eta) & row

    return member


def sample_set(member, n_per_axis, d=2):
    """Grid sample of a membership-defined subset of the torus."""
    theta = -np.pi + 2 * np.pi * (np.arange(n_per_axis) + 0.5) / n_per_axis
    grid = np.stack(np.meshgrid(*([theta] * d), indexing="ij"), axis=-1).reshape(-1, d)
    return SupportSample(grid[member(grid)], np.pi / n_per_axis, {"kind": "grid", "n": n_per_axis},
                         lambda f: sample_set(member, int(n_per_axis * f), d))


@dataclass
class GapPolynomial:
    """``Q(z) = 1 - sum_m h_m z^m`` with a certified sup bound on a support.

    Attributes
    ----------
    degree : int
        ``k``, the cube order of the frequencies.
    coefficients : ndarray
        ``h_m`` aligned with ``freqs``.
    freqs : ndarray of shape (p, d)
    sampled_max : float
        ``max |Q|`` over the support sample.
    slack : float
        Covering allowance between samples (second-order Taylor bound).
    support : dict
        Descriptor of the support set.
    """

    degree: int
    coefficients: np.ndarray
    freqs: np.ndarray
    sampled_max: float
    slack: float
    support: dict = field(default_factory=dict)

    @property
    def bound(self):
        return self.sampled_max + self.slack

    @property
    def d(self):
        return self.freqs.shape[1]

    def __call__(self, theta):
        theta = np.atleast_2d(np.asarray(theta, dtype=float))
        if theta.shape[1] != self.d:
            theta = theta.reshape(-1, self.d)
        return _evaluate(self.coefficients, self.freqs, theta)

    def dense(self):
        """Coefficient array of ``Q`` indexed by ``|m_l|`` (orthant signs dropped)."""
        k = self.degree
        arr = np.zeros((k + 1,) * self.d, dtype=complex)
        arr[(0,) * self.d] = 1.0
        for m, h in zip(np.abs(self.freqs).astype(int), self.coefficients):
            arr[tuple(m)] -= h
        return arr

    def to_dict(self):
        return {
            "degree": self.degree,
            "coefficients_real": self.coefficients.real.tolist(),
            "coefficients_imag": self.coefficients.imag.tolist(),
            "freqs": self.freqs.astype(int).tolist(),
            "sampled_max": self.sampled_max,
            "slack": self.slack,
            "bound": self.bound,
            "support": self.support,
        }


def _evaluate(coef, freqs, theta, chunk=1 << 15, grad=False):
    """``Q`` at ``theta`` and optionally ``sum_l |dQ/dtheta_l|``."""
    out = np.empty(len(theta), dtype=complex)
    g = np.empty(len(theta)) if grad else None
    for start in range(0, len(theta), chunk):
        E = np.exp(1j * theta[start:start + chunk] @ freqs.T)
        out[start:start + chunk] = 1.0 - E @ coef
        if grad:
            g[start:start + chunk] = np.abs((E * coef) @ (1j * freqs)).sum(axis=1)
    return (out, g) if grad else out


def _taylor_bound(coef, freqs, sample):
    """``(max |Q|, slack)`` over the sample with a second-order covering allowance.

    For ``|t|_inf <= delta``, ``|Q(x + t)| <= |Q(x)| + delta sum_l |d_l Q(x)|
    + delta^2 / 2 sum_m |h_m| |m|_1^2``.
    """
    if len(sample.points) == 0:
        return 0.0, 0.0
    if sample.spacing == 0:
        return float(np.abs(_evaluate(coef, freqs, sample.points)).max()), 0.0
    q, g = _evaluate(coef, freqs, sample.points, grad=True)
    aq = np.abs(q)
    delta = sample.spacing
    second = 0.5 * delta ** 2 * float(np.sum(np.abs(coef) * np.abs(freqs).sum(axis=1) ** 2))
    mx = float(aq.max())
    return mx, float((aq + delta * g).max() - mx + second)


def _lawson(A, iters, tol=1e-12, target=None, stop_below=None):
    """Discrete minimax fit of ``target`` (default all ones) by the columns of ``A``.

    Returns ``(max_error, coef, lower_bound)``. For probability weights
    ``w`` the weighted least-squares residual never exceeds the minimax
    error, which gives the lower bound and an early exit once it passes
    ``stop_below``; the loop also stops once the sampled maximum is below
    ``stop_below``.
    """
    n = A.shape[0]
    w = np.full(n, 1.0 / n)
    ones = np.ones(n, dtype=complex) if target is None else np.asarray(target, dtype=complex)
    best = (np.inf, None)
    lower = 0.0
    for _ in range(iters):
        sw = np.sqrt(w)
        coef = linalg.lstsq(A * sw[:, None], ones * sw, lapack_driver="gelsd")[0]
        err = np.abs(ones - A @ coef)
        lower = max(lower, float(np.sqrt(np.sum(w * err ** 2))))
        mx = err.max()
        if mx < best[0]:
            best = (mx, coef)
        if stop_below is not None and (best[0] <= stop_below or lower > stop_below):
            break
        w = w * err
        s = w.sum()
        if s <= tol:
            break
        w /= s
    return best[0], best[1], lower


def certify(coef, freqs, support, max_points=4_000_000):
    """Sampled maximum of ``|1 - sum h_m z^m|`` and a covering slack.

    The slack is the second-order Taylor allowance between samples. The
    sample is refined until the slack is below 1% of the sampled maximum
    or the point budget is reached.
    """
    sample = support
    while True:
        mx, slack = _taylor_bound(coef, freqs, sample)
        if slack <= 0.01 * max(mx, 1e-3) or sample.resample is None or 2 * len(sample.points) * 2 ** (sample.d - 1) > max_points:
            return mx, slack
        factor = min(16.0, max(2.0, np.sqrt(slack / (0.01 * max(mx, 1e-3)))))
        if sample.d > 1:
            factor = min(factor, 4.0)
        sample = sample.refined(factor)


def _fit_degree(support, freqs, target_bound, iters, rounds=6):
    """Lawson fit with exchange: dense-grid violators join the fitting sample.

    Returns ``(max_on_fit_sample, coef, lower_bound)``; the lower bound
    holds for the sup over the whole support since the fitting points lie
    in it.
    """
    pts = support.points
    dense = support.refined(8 if support.d == 1 else 2)
    for _ in range(rounds):
        A = np.exp(1j * pts @ freqs.T)
        mx, coef, lower = _lawson(A, iters, stop_below=0.95 * target_bound)
        if lower > target_bound or dense is support:
            break
        vals = np.abs(_evaluate(coef, freqs, dense.points))
        bad = np.flatnonzero(vals > max(mx, 0.95 * target_bound))
        if bad.size == 0:
            break
        worst = bad[np.argsort(vals[bad])[::-1][: max(4 * len(freqs), 64)]]
        pts = np.concatenate([pts, dense.points[worst]])
    return mx, coef, lower


def build_gap_polynomial(support, k_max=30, target_bound=0.5, orthant=None, iters=200, k_min=1):
    """Search degrees ``k <= k_max`` for a certified gap polynomial.

    Parameters
    ----------
    support : SupportSample or array_like of angles (m, d)
        Arrays are treated as finite supports (spacing 0).
    k_max : int
    target_bound : float
        Required certified bound on ``|Q|``.
    orthant : tuple of +-1, optional
        Sign pattern of the frequency cube.
    iters : int
        Lawson iterations per degree.

    Returns
    -------
    GapPolynomial
        The first degree whose certificate is at most ``target_bound``.

    Raises
    ------
    NoCertificate
        If no degree up to ``k_max`` is certified.
    """
    if not isinstance(support, SupportSample):
        pts = np.asarray(support, dtype=float)
        pts = pts[:, None] if pts.ndim == 1 else pts
        support = SupportSample(wrap_angle(pts), 0.0, {"kind": "finite", "size": len(pts)})
    d = support.points.shape[1]
    best_seen = np.inf
    for k in range(k_min, k_max + 1):
        freqs = index_set(k, d, orthant)
        mx, coef, _ = _fit_degree(support, freqs, target_bound, iters)
        if mx > target_bound:
            best_seen = min(best_seen, mx)
            continue
        mx, slack = certify(coef, freqs, support)
        best_seen = min(best_seen, mx + slack)
        if mx + slack <= target_bound:
            return GapPolynomial(k, coef, freqs, float(mx), slack, dict(support.descriptor))
    raise NoCertificate(f"no degree <= {k_max} reaches bound {target_bound}; best certificate {best_seen:.4f}")


def tensor_gap_polynomial(supports, k_max=30, target_bound=0.5, orthant=None, iters=200):
    """Gap polynomial on a product ``(T - I_1) x ... x (T - I_d)`` of corridor supports.

    Each factor gets ``P_l = 1 - Q_l`` with ``|Q_l| <= eps`` and
    ``(1 + eps)^d - 1 <= target_bound``; then ``1 - prod_l P_l`` is
    supported on the orthant cube and bounded by ``target_bound`` on the
    product set.
    """
    d = len(supports)
    signs = (1,) * d if orthant is None else tuple(orthant)
    eps = (1 + target_bound) ** (1.0 / d) - 1
    factors = [build_gap_polynomial(s, k_max, eps, (signs[l],), iters) for l, s in enumerate(supports)]
    k = max(f.degree for f in factors)
    # multiply the P_l = sum h_m z_l^m into a d-dimensional coefficient array
    arrays = []
    for f in factors:
        a = np.zeros(k + 1, dtype=complex)
        for m, h in zip(np.abs(f.freqs[:, 0]).astype(int), f.coefficients):
            a[m] += h
        arrays.append(a)
    P = arrays[0]
    for a in arrays[1:]:
        P = np.multiply.outer(P, a)
    freqs = index_set(k, d, signs)
    coef = np.array([P[tuple(np.abs(m).astype(int))] for m in freqs])
    # sup over the product set is bounded factorwise
    bound_each = [f.bound for f in factors]
    product_bound = float(np.prod([1 + b for b in bound_each]) - 1)
    desc = {"kind": "tensor", "factors": [f.support for f in factors]}
    return GapPolynomial(k, coef, freqs, product_bound, 0.0, desc)


@dataclass
class PowerBound:
    n: int
    bound: float
    coefficients: np.ndarray = field(repr=False)
    freqs: np.ndarray = field(repr=False)

    def residual(self, S):
        """``int |Q^n|^2 dS``, an upper bound on ``e_{kn}(S)``."""
        loc, w = S.atom_locations, S.atom_weights
        vals = 1.0 - np.exp(1j * loc @ self.freqs.T) @ self.coefficients
        total = float(np.sum(w * np.abs(vals) ** 2))
        if not S.density.is_zero:
            m = max(64, 4 * int(np.abs(self.freqs).max()) + 32)
            theta = -np.pi + 2 * np.pi * np.arange(m) / m
            grid = np.stack(np.meshgrid(*([theta] * S.d), indexing="ij"), axis=-1).reshape(-1, S.d)
            vals = 1.0 - np.exp(1j * grid @ self.freqs.T) @ self.coefficients
            total += float(np.sum(S.density(grid) * np.abs(vals) ** 2) * (2 * np.pi / m) ** S.d)
        return total


def power_error_bound(Q, n, S_total_mass):
    """``4^-n S(T^d)`` and the expansion ``Q^n = 1 - sum h_{m,n} z^m``.

    Parameters
    ----------
    Q : GapPolynomial
        Certified with ``Q.bound <= 1/2``.
    n : int
    S_total_mass : float

    Returns
    -------
    PowerBound
    """
    if n < 1:
        raise ValueError("n must be positive")
    base = Q.dense()
    acc = base
    for _ in range(n - 1):
        acc = signal.convolve(acc, base, method="direct")
    d = Q.d
    signs = np.sign(Q.freqs[0]) if len(Q.freqs) else np.ones(d)
    idx = [m for m in itertools.product(*(range(s) for s in acc.shape)) if any(m)]
    freqs = np.array(idx, dtype=float) * signs
    coef = -np.array([acc[m] for m in idx])
    return PowerBound(n, float(4.0 ** (-n) * S_total_mass), coef, freqs)
