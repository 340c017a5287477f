"""Stationary Gaussian fields on regular grids by circulant embedding.

The covariance is sampled on a periodic grid large enough to hold the
target grid plus the covariance range; when the resulting circulant
matrix is nonnegative its FFT diagonalizes it and one complex FFT yields
two independent real fields, of which the real part is returned.
Otherwise the embedding is doubled, and small grids fall back to a dense
eigendecomposition of the Gram matrix.
"""

from dataclasses import dataclass
import numbers

import numpy as np
from scipy import fft

from .._validation import check_positive, check_rng
from ..exceptions import EmbeddingNotPSD

__all__ = ["GridSpec", "FieldSample", "sample_gaussian_field", "sample_gaussian_batch", "circulant_eigenvalues"]

NEG_TOL = 1e-8
DENSE_LIMIT = 4096


@dataclass(frozen=True)
class GridSpec:
    """Regular grid ``origin + step * j`` for ``0 <= j < shape``."""

    origin: tuple
    step: float
    shape: tuple

    def __post_init__(self):
        object.__setattr__(self, "origin", tuple(float(x) for x in np.atleast_1d(self.origin)))
        object.__setattr__(self, "shape", tuple(int(n) for n in np.atleast_1d(self.shape)))
        check_positive(self.step, "step")
        if len(self.origin) != len(self.shape) or min(self.shape) < 1:
            raise ValueError("origin and shape must have matching positive lengths")

    @property
    def d(self):
        return len(self.shape)

    def points(self):
        axes = [o + self.step * np.arange(n) for o, n in zip(self.origin, self.shape)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.d)

    def to_dict(self):
        return {"origin": list(self.origin), "step": self.step, "shape": list(self.shape)}


@dataclass(frozen=True)
class FieldSample:
    grid: GridSpec
    values: np.ndarray
    seed: object = None
    method: str = "circulant"


def _embedding_shape(grid, support, factor):
    out = []
    for n in grid.shape:
        reach = int(np.ceil(support / grid.step)) if support is not None else n
        m = max(2 * (n - 1), n + 2 * reach, 1)
        out.append(fft.next_fast_len(int(factor * m)))
    return tuple(out)


def circulant_eigenvalues(kernel, grid, m_shape):
    """Eigenvalues of the circulant embedding of ``kernel`` on a periodic grid."""
    axes = []
    for m in m_shape:
        j = np.arange(m)
        axes.append(np.minimum(j, m - j) * grid.step)
    lags = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, grid.d)
    # symmetric covariances make the minimal-image first row well defined
    c = kernel(lags).reshape(m_shape)
    return np.real(fft.fftn(c))


def _dense_sample(kernel, grid, rng):
    pts = grid.points()
    diff = pts[:, None, :] - pts[None, :, :]
    G = kernel(diff.reshape(-1, grid.d)).reshape(len(pts), len(pts))
    G = 0.5 * (G + G.T)
    lam, vec = np.linalg.eigh(G)
    if lam.min() < -NEG_TOL * max(lam.max(), 1e-300):
        raise EmbeddingNotPSD(f"covariance not positive semidefinite on the grid (min eigenvalue {lam.min():.3e})")
    lam = np.clip(lam, 0.0, None)
    z = rng.standard_normal(len(pts))
    return (vec * np.sqrt(lam)) @ z


def _psd_embedding(kernel, grid, max_doublings):
    support = getattr(kernel, "support_radius", None)
    for k in range(max_doublings + 1):
        m_shape = _embedding_shape(grid, support, 2 ** k)
        lam = circulant_eigenvalues(kernel, grid, m_shape)
        if lam.min() >= -NEG_TOL * lam.max():
            return np.clip(lam, 0.0, None), m_shape
    return None, None


def sample_gaussian_field(kernel, grid, rng=None, max_doublings=3):
    """Draw one centred Gaussian field with covariance ``kernel`` on ``grid``.

    Parameters
    ----------
    kernel : CovarianceKernel or callable
        Maps lags of shape (n, d) to covariances.
    grid : GridSpec
    rng : int, Generator or None
    max_doublings : int
        Embedding enlargements tried before the dense fallback.

    Returns
    -------
    FieldSample

    Raises
    ------
    EmbeddingNotPSD
        If the embedding stays indefinite and the grid is too large for
        the dense fallback.
    """
    seed = rng if isinstance(rng, numbers.Integral) else None
    rng = check_rng(rng)
    lam, m_shape = _psd_embedding(kernel, grid, max_doublings)
    if lam is None:
        if int(np.prod(grid.shape)) > DENSE_LIMIT:
            raise EmbeddingNotPSD("circulant embedding is indefinite and the grid is too large for dense factorization")
        values = _dense_sample(kernel, grid, rng).reshape(grid.shape)
        return FieldSample(grid, values, seed, "dense")
    z = rng.standard_normal(m_shape) + 1j * rng.standard_normal(m_shape)
    y = fft.fftn(np.sqrt(lam / lam.size) * z)
    values = np.real(y)[tuple(slice(0, n) for n in grid.shape)]
    return FieldSample(grid, np.ascontiguousarray(values), seed, "circulant")


def sample_gaussian_batch(kernel, grid, n, rng=None, max_doublings=3):
    """Draw ``n`` independent fields at once; returns shape ``(n, *grid.shape)``.

    Each complex FFT provides two independent fields (real and imaginary
    parts), so ``ceil(n / 2)`` transforms are used.
    """
    rng = check_rng(rng)
    lam, m_shape = _psd_embedding(kernel, grid, max_doublings)
    if lam is None:
        raise EmbeddingNotPSD("circulant embedding is indefinite")
    half = (n + 1) // 2
    z = rng.standard_normal((half,) + m_shape) + 1j * rng.standard_normal((half,) + m_shape)
    axes = tuple(range(1, grid.d + 1))
    y = fft.fftn(np.sqrt(lam / lam.size) * z, axes=axes)
    y = y[(slice(None),) + tuple(slice(0, k) for k in grid.shape)]
    return np.concatenate([y.real, y.imag])[:n]
