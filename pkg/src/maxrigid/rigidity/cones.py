"""Minor cones: polyhedral cones admitting ``t0`` with ``<t0, g> > 0`` on the cone.

For a cone generated by ``g_1, ..., g_k`` a witness exists exactly when
the linear system ``<t0, g_i> >= 1`` is feasible. By Gordan's alternative
this fails exactly when some convex combination of the generators
vanishes, i.e. when the closed cone is not pointed.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

__all__ = ["ConeSpec", "minor_cone_witness", "is_pointed", "has_antipodal_pair"]


@dataclass(frozen=True)
class ConeSpec:
    """Nonnegative hull of ``generators`` in R^d."""

    generators: tuple

    def __post_init__(self):
        G = np.atleast_2d(np.asarray(self.generators, dtype=float))
        if G.size == 0:
            raise ValueError("a cone needs at least one generator")
        if np.any(np.linalg.norm(G, axis=1) == 0):
            raise ValueError("generators must be nonzero")
        object.__setattr__(self, "generators", tuple(map(tuple, G)))

    @property
    def matrix(self):
        return np.asarray(self.generators, dtype=float)

    @property
    def d(self):
        return self.matrix.shape[1]

    def normalized(self):
        G = self.matrix
        return ConeSpec(tuple(map(tuple, G / np.linalg.norm(G, axis=1, keepdims=True))))

    def rank(self):
        return int(np.linalg.matrix_rank(self.matrix))


def minor_cone_witness(cone):
    """Return ``t0`` with ``<t0, g_i> >= 1`` for all generators, or None.

    Solved as a linear feasibility problem minimizing ``|t0|_1`` so the
    witness is well scaled.
    """
    G = cone.normalized().matrix
    k, d = G.shape
    # variables t0 = p - q with p, q >= 0; minimize sum(p + q)
    A = np.hstack([-G, G])
    res = linprog(np.ones(2 * d), A_ub=A, b_ub=-np.ones(k), bounds=[(0, None)] * (2 * d), method="highs")
    if res.status != 0:
        return None
    t0 = res.x[:d] - res.x[d:]
    if np.min(G @ t0) < 1 - 1e-7:
        return None
    return t0


def is_pointed(cone):
    """Gordan dual test: no convex combination of generators is zero."""
    G = cone.normalized().matrix
    k, d = G.shape
    A_eq = np.vstack([G.T, np.ones((1, k))])
    b_eq = np.concatenate([np.zeros(d), [1.0]])
    res = linprog(np.zeros(k), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * k, method="highs")
    return res.status == 2


def has_antipodal_pair(cone, tol=1e-9):
    """Whether some pair satisfies ``g_i = -lambda g_j`` with ``lambda > 0``."""
    G = cone.normalized().matrix
    inner = G @ G.T
    np.fill_diagonal(inner, 0.0)
    return bool(np.any(inner <= -1 + tol))
