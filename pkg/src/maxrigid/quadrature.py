"""Quadrature of spectral integrands on R^d and on the torus.

On R^d the integral is accumulated over the box ``[-U0, U0]^d`` and then
over dyadic shells ``U <= |u|_inf < 2U``. Shell increments of a tail that
decays like a power of ``U`` form a near-geometric sequence, so the tail
beyond the last shell is extrapolated from the ratio of the last two
increments. On the torus the periodic trapezoid rule is refined by
doubling, which converges spectrally for smooth periodic integrands.
"""

from dataclasses import dataclass
import itertools

import numpy as np

from .exceptions import QuadratureDivergence

__all__ = ["QuadratureSpec", "QuadResult", "integrate", "gauss_panels"]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budgets of the spectral integrator.

    Parameters
    ----------
    atol, rtol : float
        Absolute and relative stopping tolerances on the extrapolated total.
    order : int
        Gauss-Legendre nodes per panel.
    initial_radius : float or None
        Half-side ``U0`` of the first box; chosen from the feature size of
        the integrand when None.
    max_radius : float
        Truncation radius beyond which QuadratureDivergence is raised.
    max_points : int
        Budget on integrand evaluations for one integral.
    window : float or None
        Width ``W`` of a Gaussian mollifier ``exp(-|u|^2 / (2 W^2))``
        multiplying the integrand, for slowly decaying densities.
    chunk : int
        Evaluation batch size.
    """

    atol: float = 1e-8
    rtol: float = 1e-10
    order: int = 16
    initial_radius: float | None = None
    max_radius: float = 1e5
    max_points: int = 20_000_000
    window: float | None = None
    chunk: int = 1 << 18


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    radius: float
    n_evals: int
    tail: complex = 0.0


_GL_CACHE = {}


def _gl(order):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def gauss_panels(a, b, width, order=16, breakpoints=()):
    """Nodes and weights of composite Gauss-Legendre on ``[a, b]``.

    Panels have width at most ``width``; breakpoints inside ``(a, b)``
    become panel edges so kinks of the integrand sit on edges.
    """
    edges = [a, b] + [p for p in breakpoints if a < p < b]
    edges = np.unique(edges)
    nodes, weights = [], []
    x0, w0 = _gl(order)
    for lo, hi in zip(edges[:-1], edges[1:]):
        n = max(1, int(np.ceil((hi - lo) / width - 1e-12)))
        e = np.linspace(lo, hi, n + 1)
        mid = 0.5 * (e[1:] + e[:-1])
        half = 0.5 * (e[1:] - e[:-1])
        nodes.append((mid[:, None] + half[:, None] * x0[None, :]).ravel())
        weights.append((half[:, None] * w0[None, :]).ravel())
    if not nodes:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(nodes), np.concatenate(weights)


def _eval_sum(func, pts, wts, spec):
    total = 0.0 + 0.0j
    for start in range(0, len(pts), spec.chunk):
        p = pts[start:start + spec.chunk]
        vals = func(p)
        if spec.window is not None:
            vals = vals * np.exp(-0.5 * np.sum(p * p, axis=1) / spec.window ** 2)
        total += np.dot(vals, wts[start:start + spec.chunk])
    return total


def _box_integral(func, lo, hi, d, width, spec, breakpoints, exclude=None):
    """Tensor Gauss rule over ``[lo, hi]^d``, optionally minus ``[-exclude, exclude]^d``."""
    if d == 1:
        if exclude is None:
            x, w = gauss_panels(lo, hi, width, spec.order, breakpoints)
        else:
            x1, w1 = gauss_panels(lo, -exclude, width, spec.order, breakpoints)
            x2, w2 = gauss_panels(exclude, hi, width, spec.order, breakpoints)
            x, w = np.concatenate([x1, x2]), np.concatenate([w1, w2])
        return _eval_sum(func, x[:, None], w, spec), len(x)
    # split the box into 3^d blocks and skip the central one when excluding
    if exclude is None:
        segments = [(lo, hi)]
    else:
        segments = [(lo, -exclude), (-exclude, exclude), (exclude, hi)]
    rules = [gauss_panels(a, b, width, spec.order, breakpoints) for a, b in segments]
    total, count = 0.0 + 0.0j, 0
    for combo in itertools.product(range(len(segments)), repeat=d):
        if exclude is not None and all(c == 1 for c in combo):
            continue
        xs = [rules[c][0] for c in combo]
        ws = [rules[c][1] for c in combo]
        size = int(np.prod([len(x) for x in xs]))
        count += size
        if count > spec.max_points:
            raise QuadratureDivergence(f"evaluation budget {spec.max_points} exceeded in dimension {d}")
        grid = np.stack(np.meshgrid(*xs, indexing="ij"), axis=-1).reshape(-1, d)
        wgrid = np.prod(np.stack(np.meshgrid(*ws, indexing="ij"), axis=-1).reshape(-1, d), axis=1)
        total += _eval_sum(func, grid, wgrid, spec)
    return total, count


def _extrapolated_tail(increments):
    if len(increments) < 2:
        return 0.0
    a, b = increments[-2], increments[-1]
    if a == 0 or b == 0:
        return 0.0
    ratio = b / a
    if ratio.imag != 0 and abs(ratio.imag) > 0.1 * abs(ratio.real):
        return 0.0
    ratio = ratio.real
    if not 0.0 < ratio < 0.9:
        return 0.0
    return b * ratio / (1.0 - ratio)


def _integrate_continuous(func, d, spec, length_scale, feature, breakpoints):
    width = min(1.0, np.pi / max(length_scale, 1e-12))
    u0 = spec.initial_radius
    if u0 is None:
        u0 = max(16.0, 16.0 * np.pi / max(feature, 1e-12))
    if d > 1 and spec.initial_radius is None:
        u0 = min(u0, 32.0)
        width = max(width, min(1.0, 2 * np.pi / max(length_scale, 1e-12)))
    partial, n_evals = _box_integral(func, -u0, u0, d, width, spec, breakpoints)
    increments = []
    prev_total = None
    settled = 0
    radius = u0
    while True:
        inc, n = _box_integral(func, -2 * radius, 2 * radius, d, width, spec, breakpoints, exclude=radius)
        n_evals += n
        radius *= 2
        partial += inc
        increments.append(inc)
        tail = _extrapolated_tail(increments)
        total = partial + tail
        if prev_total is not None:
            tol = spec.atol + spec.rtol * abs(total)
            err = abs(total - prev_total)
            # an extrapolated tail must agree on two consecutive shells
            settled = settled + 1 if err <= tol else 0
            if settled >= (1 if abs(inc) <= tol else 2):
                return QuadResult(complex(total), float(err), float(radius), n_evals, complex(tail))
        prev_total = total
        if 2 * radius > spec.max_radius or n_evals > spec.max_points:
            raise QuadratureDivergence(
                f"tail not settled at radius {radius:g}: last shell increment {abs(inc):.3e}"
            )


def _integrate_torus(func, d, spec, length_scale):
    m = int(2 ** np.ceil(np.log2(max(64, 4 * length_scale + 16))))
    prev = None
    while True:
        size = m ** d
        if size > spec.max_points:
            raise QuadratureDivergence(f"torus grid of {m}^{d} points exceeds the budget")
        theta = -np.pi + 2 * np.pi * np.arange(m) / m
        grid = np.stack(np.meshgrid(*([theta] * d), indexing="ij"), axis=-1).reshape(-1, d)
        w = np.full(size, (2 * np.pi / m) ** d)
        val = _eval_sum(func, grid, w, spec)
        if prev is not None:
            err = abs(val - prev)
            if err <= spec.atol + spec.rtol * abs(val):
                return QuadResult(complex(val), float(err), float(np.pi), size)
        prev = val
        m *= 2


def integrate(func, d, spec=None, *, torus=False, length_scale=1.0, feature=1.0, breakpoints=()):
    """Integrate ``func`` over R^d or over [-pi, pi)^d.

    Parameters
    ----------
    func : callable
        Maps points of shape (n, d) to values of shape (n,).
    d : int
        Dimension.
    spec : QuadratureSpec, optional
    torus : bool
        Integrate over the torus instead of R^d.
    length_scale : float
        Largest spatial extent the integrand oscillates with; sets the
        panel width on R^d and the starting grid on the torus.
    feature : float
        Smallest spatial feature (e.g. cell side); sets the first box.
    breakpoints : sequence of float
        Per-axis abscissae where the integrand has kinks.

    Returns
    -------
    QuadResult
    """
    spec = spec or QuadratureSpec()
    if torus:
        return _integrate_torus(func, d, spec, length_scale)
    return _integrate_continuous(func, d, spec, length_scale, feature, breakpoints)
