import numpy as np
import pytest

from maxrigid.rigidity import ConeSpec, has_antipodal_pair, is_pointed, minor_cone_witness


def _brute_force_pointed(G, rng, trials=20000):
    # a pointed cone has a strictly positive linear functional on all generators
    t = rng.standard_normal((trials, G.shape[1]))
    return bool(np.any(np.all(t @ G.T > 1e-9, axis=1)))


def test_quadrant_witness():
    t = minor_cone_witness(ConeSpec(((1.0, 0.0), (0.0, 1.0))))
    np.testing.assert_allclose(t, [1.0, 1.0], atol=1e-9)


def test_line_has_no_witness():
    cone = ConeSpec(((1.0, 0.0), (-1.0, 0.0)))
    assert minor_cone_witness(cone) is None and not is_pointed(cone) and has_antipodal_pair(cone)


def test_tripod_without_antipodal_pair_is_not_pointed():
    a = 2 * np.pi / 3
    cone = ConeSpec(tuple((np.cos(k * a), np.sin(k * a)) for k in range(3)))
    assert not has_antipodal_pair(cone)
    assert not is_pointed(cone) and minor_cone_witness(cone) is None


def test_witness_is_strictly_positive_on_generators():
    cone = ConeSpec(((1.0, 0.2, 0.0), (0.3, 1.0, 0.1), (0.2, 0.1, 1.0), (1.0, 1.0, 1.0)))
    t = minor_cone_witness(cone)
    assert np.all(cone.matrix @ t >= 1 - 1e-9)


def test_predicate_agrees_with_random_search(rng):
    for _ in range(60):
        d = int(rng.integers(2, 4))
        G = rng.standard_normal((int(rng.integers(2, 6)), d))
        cone = ConeSpec(tuple(map(tuple, G)))
        assert is_pointed(cone) == (minor_cone_witness(cone) is not None)
        if _brute_force_pointed(G, rng):
            assert is_pointed(cone)


def test_zero_generator_rejected():
    with pytest.raises(ValueError):
        ConeSpec(((0.0, 0.0), (1.0, 0.0)))
