"""Input validation helpers used across the package."""

import numbers

import numpy as np
from sklearn.utils import check_random_state


def check_dimension(d):
    if not isinstance(d, numbers.Integral) or isinstance(d, bool) or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


def check_points(u, d):
    """Coerce ``u`` to a float array of shape (n, d).

    A scalar or 1-D array is accepted for ``d == 1``; a single point of
    length ``d`` is accepted for any ``d``.
    """
    arr = np.asarray(u, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1) if d == 1 else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != d:
        raise ValueError(f"expected points of dimension {d}, got shape {np.shape(u)}")
    return arr


def check_positive(value, name):
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


def check_nonnegative(value, name):
    value = float(value)
    if not np.isfinite(value) or value < 0:
        raise ValueError(f"{name} must be nonnegative and finite, got {value!r}")
    return value


def check_rng(random_state):
    """Return a ``numpy.random.Generator``.

    Integers seed a fresh PCG64 generator, generators pass through, and
    legacy ``RandomState`` objects are wrapped via their bit generator.
    """
    if isinstance(random_state, np.random.Generator):
        return random_state
    if random_state is None or isinstance(random_state, numbers.Integral):
        return np.random.default_rng(random_state)
    legacy = check_random_state(random_state)
    return np.random.Generator(legacy._bit_generator)


def wrap_angle(theta):
    """Fold angles to the representative in [-pi, pi)."""
    return (np.asarray(theta, dtype=float) + np.pi) % (2 * np.pi) - np.pi
