import numpy as np
import pytest

from maxrigid import Cell, DomainTag, PointMass, SpectralMeasure, check_symmetry, covariance_eval, variance_of_statistic
from maxrigid.models import TriangleModel
from maxrigid.spectral import ConstantDensity, ProductDensity, tensor_domination_check


def test_white_noise_variance_is_cell_volume():
    S = SpectralMeasure.lebesgue(DomainTag.continuous(1), 2.5)
    v = variance_of_statistic(Cell([0.3], 0.7, DomainTag.continuous(1)), S)
    assert v == pytest.approx(2.5 * 0.7, rel=1e-6)


def test_discrete_lebesgue_is_uncorrelated():
    S = SpectralMeasure.lebesgue(DomainTag.discrete(1))
    assert covariance_eval(S, np.array([[0.0]])) == pytest.approx(1.0, abs=1e-9)
    assert abs(covariance_eval(S, np.array([[3.0]]))) < 1e-9
    assert variance_of_statistic(Cell([0], 6, DomainTag.discrete(1)), S) == pytest.approx(6.0, rel=1e-9)


def test_atomic_variance_is_a_finite_sum():
    dom = DomainTag.discrete(1)
    loc = np.array([[0.4], [-0.4], [2.0]])
    w = np.array([0.3, 0.3, 1.1])
    S = SpectralMeasure.atomic(dom, loc, w)
    f = Cell([0], 4, dom)
    fh = np.ravel(f.fourier(loc))
    assert variance_of_statistic(f, S) == pytest.approx(np.sum(w * np.abs(fh) ** 2) / (2 * np.pi), rel=1e-12)


def test_point_mass_variance_is_covariance_at_zero():
    S = TriangleModel(d=1).spectral_measure()
    v = variance_of_statistic(PointMass([0.0], DomainTag.continuous(1)), S)
    assert v == pytest.approx(float(np.ravel(covariance_eval(S, np.array([[0.0]])))[0]), rel=1e-6)


def test_negative_weights_rejected():
    with pytest.raises(ValueError):
        SpectralMeasure.atomic(DomainTag.discrete(1), [[0.1]], [-1.0])


def test_torus_atoms_are_folded():
    S = SpectralMeasure.atomic(DomainTag.discrete(1), [[2 * np.pi + 0.5]], [1.0])
    assert S.atom_locations[0, 0] == pytest.approx(0.5)


def test_json_round_trip():
    S = SpectralMeasure(DomainTag.discrete(2), ProductDensity([ConstantDensity(1, 2.0), ConstantDensity(1, 0.5)]),
                        [[0.1, 0.2]], [0.7], tag="mixed")
    T = SpectralMeasure.from_json(S.to_json())
    pts = np.random.default_rng(0).uniform(-3, 3, (20, 2))
    np.testing.assert_allclose(T.density(pts), S.density(pts))
    np.testing.assert_allclose(T.atom_weights, S.atom_weights)
    assert T.total_mass() == pytest.approx(S.total_mass())


def test_symmetry_check_flags_one_sided_atom():
    dom = DomainTag.discrete(1)
    assert check_symmetry(SpectralMeasure.atomic(dom, [[0.5], [-0.5]], [1.0, 1.0])).symmetric
    assert not check_symmetry(SpectralMeasure.atomic(dom, [[0.5]], [1.0])).symmetric


def test_product_dominates_itself():
    dom = DomainTag.discrete(2)
    S = SpectralMeasure(dom, ProductDensity([ConstantDensity(1, 2.0), ConstantDensity(1, 3.0)]))
    f1 = SpectralMeasure(DomainTag.discrete(1), ConstantDensity(1, 2.0))
    f2 = SpectralMeasure(DomainTag.discrete(1), ConstantDensity(1, 3.0))
    assert tensor_domination_check(S, [f1, f2], n_grid=21).dominated
    assert not tensor_domination_check(S.scaled(2.0), [f1, f2], n_grid=21).dominated
