import numpy as np

from maxrigid import DomainTag, grid_design
from maxrigid.design import BallRegion, ConeRegion, HalfSpaceRegion, OrthantRegion


def test_grid_design_avoids_the_exclusion_ball():
    des = grid_design(BallRegion(0.5), 0.1, 3.0, d=1)
    for f in des.functionals:
        lo, hi = f.support_box()
        assert BallRegion(0.5).avoids(np.asarray(lo), np.asarray(hi))
    assert len(des.functionals) > 40


def test_discrete_design_uses_lattice_sites():
    des = grid_design(BallRegion(0.5), 1, 4, d=1, domain=DomainTag.discrete(1))
    corners = sorted(float(np.ravel(f.support_box()[0])[0]) for f in des.functionals)
    assert 0.0 not in corners and -4.0 in corners and 4.0 in corners or 3.0 in corners


def test_region_predicates():
    assert HalfSpaceRegion((1.0, 0.0)).avoids(np.array([-2.0, -1.0]), np.array([-0.5, 1.0]))
    assert not HalfSpaceRegion((1.0, 0.0)).avoids(np.array([-2.0, -1.0]), np.array([0.5, 1.0]))
    assert OrthantRegion((1, 1)).avoids(np.array([-2.0, 1.0]), np.array([-1.0, 2.0]))
    assert not OrthantRegion((1, 1)).avoids(np.array([1.0, 1.0]), np.array([2.0, 2.0]))


def test_cone_region_matches_orthant_for_coordinate_generators():
    cone = ConeRegion(((1.0, 0.0), (0.0, 1.0)))
    orth = OrthantRegion((1, 1))
    rng = np.random.default_rng(3)
    for _ in range(50):
        lo = rng.uniform(-3, 3, 2)
        hi = lo + rng.uniform(0.1, 1.0, 2)
        assert cone.avoids(lo, hi) == orth.avoids(lo, hi)
