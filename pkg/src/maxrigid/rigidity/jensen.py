"""Zero density ``zeta(psi) = liminf n_T / T`` of a real function on the line.

Zeros are located as sign changes on a uniform grid and polished with
Brent's method. Tangential (even-order) zeros are invisible to sign
counting and out of scope.
"""

from dataclasses import dataclass, field
import csv
import io

import numpy as np
from scipy.optimize import brentq

from ..exceptions import ClusteredZeros
from ..bessel import bessel_transform

__all__ = ["ZeroDensityEstimate", "jensen_zero_density", "radial_bessel"]


@dataclass
class ZeroDensityEstimate:
    """Zero counts ``n_T`` on ``[-T, T]`` and the tail estimate of ``n_T / T``.

    Attributes
    ----------
    radii : ndarray
    counts : ndarray
        Nondecreasing in ``T``.
    estimate : float
        ``min n_T / T`` over radii ``T >= T_max / 2``.
    zeros : ndarray
        Polished zeros in ``[-T_max, T_max]``.
    tag : str
    """

    radii: np.ndarray
    counts: np.ndarray
    estimate: float
    zeros: np.ndarray = field(repr=False)
    tag: str = ""

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["T", "n_T", "n_T_over_T"])
        for T, n in zip(self.radii, self.counts):
            w.writerow([repr(float(T)), int(n), repr(float(n / T))])
        return buf.getvalue()


def radial_bessel(d, rho=1.0):
    """Radial profile ``t -> J_d(rho t)`` of the ball transform; type ``rho``."""
    return lambda t: bessel_transform(d, rho * np.abs(np.asarray(t, dtype=float)))


def _polish(psi, grid, vals):
    s = np.sign(vals)
    idx = np.flatnonzero(s[:-1] * s[1:] < 0)
    exact = grid[vals == 0]
    roots = [brentq(psi, grid[i], grid[i + 1], xtol=1e-14) for i in idx]
    return np.sort(np.concatenate([roots, exact]))


def jensen_zero_density(psi, T_max=200.0, refinement=0.01, n_radii=64, tag="", max_refine=3):
    """Estimate the zero density of ``psi`` from sign changes on ``[-T_max, T_max]``.

    Parameters
    ----------
    psi : callable
        Vectorized real function.
    T_max : float
    refinement : float
        Grid step of the sign-change scan.
    n_radii : int
        Radii between ``T_max / n_radii`` and ``T_max`` at which ``n_T`` is reported.
    max_refine : int
        Halvings of the step allowed when two zeros share a grid cell.

    Returns
    -------
    ZeroDensityEstimate

    Raises
    ------
    ClusteredZeros
        If two zeros remain closer than the grid step after refinement.
    """
    step = refinement
    for _ in range(max_refine + 1):
        n = int(np.ceil(2 * T_max / step)) + 1
        grid = np.linspace(-T_max, T_max, n)
        vals = np.asarray(psi(grid), dtype=float)
        scalar = lambda x: float(np.asarray(psi(np.array([x])))[0])
        zeros = _polish(scalar, grid, vals)
        h = grid[1] - grid[0]
        if len(zeros) < 2 or np.min(np.diff(zeros)) > h:
            break
        step /= 2
    else:
        raise ClusteredZeros(f"zeros closer than the finest step {step:.2e}")
    radii = T_max * np.arange(1, n_radii + 1) / n_radii
    counts = np.searchsorted(np.sort(np.abs(zeros)), radii, side="right")
    tail = radii >= T_max / 2
    estimate = float(np.min(counts[tail] / radii[tail]))
    return ZeroDensityEstimate(radii, counts, estimate, zeros, tag)
