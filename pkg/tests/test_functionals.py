import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from maxrigid import Ball, Cell, DomainTag, PointMass, WeightedSum, fourier_of_functional


def _direct_transform_1d(a, b, u):
    re = quad(lambda x: np.cos(u * x), a, b)[0]
    im = quad(lambda x: -np.sin(u * x), a, b)[0]
    return re + 1j * im


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(0.05, 2.0), st.floats(-20, 20))
def test_cell_transform_matches_direct_integral(corner, side, u):
    f = Cell([corner], side, DomainTag.continuous(1))
    got = complex(np.ravel(f.fourier(np.array([[u]])))[0])
    assert got == pytest.approx(_direct_transform_1d(corner, corner + side, u), abs=1e-9)


def test_point_mass_transform_is_a_phase():
    u = np.linspace(-5, 5, 11)[:, None]
    f = PointMass([0.7], DomainTag.continuous(1))
    np.testing.assert_allclose(np.ravel(f.fourier(u)), np.exp(-1j * 0.7 * u.ravel()), atol=1e-14)


def test_discrete_cell_is_a_geometric_sum():
    th = np.linspace(-3, 3, 13)[:, None]
    f = Cell([2], 5, DomainTag.discrete(1))
    expected = sum(np.exp(1j * k * th.ravel()) for k in range(2, 7))
    np.testing.assert_allclose(np.ravel(f.fourier(th)), expected, atol=1e-12)


def test_one_dimensional_ball_equals_cell():
    u = np.linspace(-10, 10, 41)[:, None]
    b = Ball([0.2], 0.5, DomainTag.continuous(1))
    c = Cell([-0.3], 1.0, DomainTag.continuous(1))
    np.testing.assert_allclose(np.ravel(b.fourier(u)), np.ravel(c.fourier(u)), atol=1e-12)


def test_ball_at_zero_frequency_is_volume():
    b = Ball([0.0, 0.0], 1.5, DomainTag.continuous(2))
    assert complex(np.ravel(b.fourier(np.zeros((1, 2))))[0]) == pytest.approx(np.pi * 1.5**2)


def test_weighted_sum_is_linear():
    dom = DomainTag.continuous(1)
    f, g = Cell([0.0], 1.0, dom), PointMass([2.0], dom)
    w = WeightedSum(((f, 2.0), (g, -0.5)), dom)
    u = np.linspace(-4, 4, 9)[:, None]
    np.testing.assert_allclose(np.ravel(fourier_of_functional(w, u)),
                               2 * np.ravel(f.fourier(u)) - 0.5 * np.ravel(g.fourier(u)), atol=1e-13)


def test_translation_multiplies_by_phase():
    dom = DomainTag.continuous(1)
    f = Cell([0.0], 0.4, dom)
    u = np.linspace(-6, 6, 7)[:, None]
    np.testing.assert_allclose(np.ravel(f.translate([1.3]).fourier(u)),
                               np.exp(-1j * 1.3 * u.ravel()) * np.ravel(f.fourier(u)), atol=1e-12)


def test_domain_round_trip():
    dom = DomainTag.discrete(3)
    assert DomainTag.from_dict(dom.to_dict()) == dom
    assert dom.is_torus and not DomainTag.continuous(2).is_torus
