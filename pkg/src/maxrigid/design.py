"""Exclusion regions and observation designs built from cell grids."""

from dataclasses import dataclass, field
import itertools

import numpy as np
from scipy.optimize import linprog

from ._validation import check_positive
from .functionals import Cell, DomainTag

__all__ = [
    "BallRegion",
    "ConeRegion",
    "HalfSpaceRegion",
    "BandRegion",
    "OrthantRegion",
    "ObservationDesign",
    "grid_design",
]


class Region:
    """Exclusion region; ``avoids(lo, hi, margin)`` tests a support box."""

    kind = "abstract"

    def avoids(self, lo, hi, margin=0.0):
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError


def _box_corners(lo, hi):
    return np.array(list(itertools.product(*zip(lo, hi))))


@dataclass(frozen=True)
class BallRegion(Region):
    """Open ball ``B(center, radius)``."""

    radius: float
    center: tuple = None
    kind = "ball"

    def avoids(self, lo, hi, margin=0.0):
        c = np.zeros(len(lo)) if self.center is None else np.asarray(self.center, dtype=float)
        nearest = np.clip(c, lo, hi)
        return float(np.linalg.norm(nearest - c)) >= self.radius + margin - 1e-12

    def to_dict(self):
        return {"kind": self.kind, "radius": self.radius, "center": self.center}


@dataclass(frozen=True)
class HalfSpaceRegion(Region):
    """``{x : <normal, x> > offset}``."""

    normal: tuple
    offset: float = 0.0
    kind = "half_space"

    def avoids(self, lo, hi, margin=0.0):
        n = np.asarray(self.normal, dtype=float)
        top = np.max(_box_corners(lo, hi) @ n) / np.linalg.norm(n)
        return top <= self.offset / np.linalg.norm(n) - margin + 1e-12

    def to_dict(self):
        return {"kind": self.kind, "normal": list(self.normal), "offset": self.offset}


@dataclass(frozen=True)
class BandRegion(Region):
    """``{x : |x_axis| < width / 2}``."""

    width: float
    axis: int = 0
    kind = "band"

    def avoids(self, lo, hi, margin=0.0):
        h = self.width / 2 + margin
        return lo[self.axis] >= h - 1e-12 or hi[self.axis] <= -h + 1e-12

    def to_dict(self):
        return {"kind": self.kind, "width": self.width, "axis": self.axis}


@dataclass(frozen=True)
class OrthantRegion(Region):
    """Closed orthant ``{x : signs_l x_l >= 0 for all l}``."""

    signs: tuple
    kind = "orthant"

    def avoids(self, lo, hi, margin=0.0):
        s = np.asarray(self.signs, dtype=float)
        # some coordinate must stay strictly on the negative side of its sign
        top = np.where(s > 0, hi, -lo)
        return bool(np.any(top <= -margin + 1e-12))

    def to_dict(self):
        return {"kind": self.kind, "signs": list(self.signs)}


@dataclass(frozen=True)
class ConeRegion(Region):
    """Nonnegative hull of ``generators``; box intersection decided by an LP."""

    generators: tuple
    kind = "cone"

    def avoids(self, lo, hi, margin=0.0):
        G = np.asarray(self.generators, dtype=float).T
        d, k = G.shape
        lo_m, hi_m = np.asarray(lo) - margin, np.asarray(hi) + margin
        # feasible lambda >= 0 with lo <= G lambda <= hi means the box meets the cone
        A = np.vstack([G, -G])
        b = np.concatenate([hi_m, -lo_m])
        res = linprog(np.zeros(k), A_ub=A, b_ub=b, bounds=[(0, None)] * k, method="highs")
        return res.status == 2

    def to_dict(self):
        return {"kind": self.kind, "generators": [list(g) for g in self.generators]}


@dataclass(frozen=True, eq=False)
class ObservationDesign:
    """Observation functionals supported outside an exclusion region.

    Parameters
    ----------
    functionals : list of LinearFunctional
    exclusion : Region
    step, extent : float
        Grid step ``h`` and half-width ``R`` the design was generated with.
    """

    functionals: tuple
    exclusion: Region
    step: float | None = None
    extent: float | None = None

    def __post_init__(self):
        fs = tuple(self.functionals)
        object.__setattr__(self, "functionals", fs)
        if len(set(fs)) != len(fs):
            raise ValueError("design functionals must be pairwise distinct")
        for f in fs:
            lo, hi = f.support_box()
            if not self.exclusion.avoids(lo, hi):
                raise ValueError(f"functional with support [{lo}, {hi}] meets the exclusion region")

    def __len__(self):
        return len(self.functionals)

    def __iter__(self):
        return iter(self.functionals)

    def union(self, other):
        extra = [f for f in other.functionals if f not in set(self.functionals)]
        return ObservationDesign(self.functionals + tuple(extra), self.exclusion, self.step, self.extent)


def grid_design(exclusion, step, extent, d=1, domain=None):
    """Cells ``h k + [0, h)^d`` inside ``[-R, R]^d`` lying outside ``exclusion``.

    A cell is kept when its closed support misses the open exclusion
    region, i.e. its centre is at least ``h / 2`` from the boundary along
    the relevant direction.
    """
    step = check_positive(step, "step")
    extent = check_positive(extent, "extent")
    domain = domain or DomainTag.continuous(d)
    kmax = int(np.floor(extent / step + 1e-9))
    ks = np.arange(-kmax, kmax)
    cells = []
    for k in itertools.product(ks, repeat=domain.d):
        corner = step * np.asarray(k, dtype=float)
        if np.any(corner + step > extent + 1e-12):
            continue
        cell = Cell(corner, step, domain)
        if exclusion.avoids(*cell.support_box()):
            cells.append(cell)
    return ObservationDesign(tuple(cells), exclusion, step, extent)
