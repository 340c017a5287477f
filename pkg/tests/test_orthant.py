import numpy as np
import pytest

from maxrigid import DomainTag, OrthantApproximator, SpectralMeasure, en_curve, orthant_error_en, strong_interpolability_check
from maxrigid.orthant import index_set, toeplitz_error_en
from maxrigid.spectral import CustomDensity

A = 0.5


def _ar1():
    return SpectralMeasure(DomainTag.discrete(1),
                           CustomDensity(lambda t: 1 / np.abs(1 - A * np.exp(1j * np.ravel(t))) ** 2, 1))


def test_index_set_is_the_positive_cube():
    m = index_set(3, 2)
    assert len(m) == 9 and m.min() == 1 and m.max() == 3
    assert set(map(tuple, index_set(2, 2, orthant=(1, -1)))) == {(1, -1), (1, -2), (2, -1), (2, -2)}


def test_white_noise_is_not_predictable():
    S = SpectralMeasure.lebesgue(DomainTag.discrete(1))
    assert orthant_error_en(S, 5) / S.total_mass() == pytest.approx(1.0, rel=1e-9)


def test_ar1_one_sided_error_is_the_innovation_variance():
    S = _ar1()
    for n in (1, 3, 6):
        assert orthant_error_en(S, n) / S.total_mass() == pytest.approx(1 - A * A, rel=1e-8)


@pytest.mark.parametrize("n", [1, 4, 8])
def test_toeplitz_route_agrees(n):
    S = SpectralMeasure(DomainTag.discrete(1), CustomDensity(lambda t: 1.2 + np.cos(np.ravel(t)) + 0.3 * np.sin(2 * np.ravel(t)), 1))
    assert toeplitz_error_en(S, n) == pytest.approx(orthant_error_en(S, n), rel=1e-8, abs=1e-12)


def test_single_atom_is_annihilated():
    S = SpectralMeasure.atomic(DomainTag.discrete(2), [[0.3, -1.1]], [2.0])
    assert orthant_error_en(S, 1) < 1e-12


def test_curve_is_nonincreasing():
    c = en_curve(_ar1(), range(1, 8))
    assert np.all(np.diff(c.errors) <= 0)


def test_gap_gives_geometric_decay_and_lebesgue_plateaus():
    grid = np.linspace(-np.pi, np.pi, 200, endpoint=False) + np.pi / 200
    off = grid[np.abs(grid) >= 1.0]
    gapped = SpectralMeasure.atomic(DomainTag.discrete(1), off[:, None], np.full(len(off), 0.05))
    rep = strong_interpolability_check(gapped, n_max=12)
    assert rep.strong and rep.rate < 0.9
    flat = strong_interpolability_check(SpectralMeasure.lebesgue(DomainTag.discrete(1)), n_max=10)
    assert not flat.strong and "plateau" in flat.reason


def test_approximator_on_a_point_cloud():
    X = np.array([[0.4], [1.7], [-2.2]])
    est = OrthantApproximator(n=3).fit(X, sample_weight=np.ones(3))
    assert est.error_ < 1e-20
    np.testing.assert_allclose(est.predict(X), 1.0, atol=1e-10)
    assert OrthantApproximator(n=1).fit(X, sample_weight=np.ones(3)).error_ > 0.1
