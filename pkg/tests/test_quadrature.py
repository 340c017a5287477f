import numpy as np
import pytest

from maxrigid import QuadratureSpec
from maxrigid.exceptions import QuadratureDivergence
from maxrigid.quadrature import integrate


def test_gaussian_integral_on_the_line():
    res = integrate(lambda x: np.exp(-x[:, 0] ** 2), 1)
    assert res.value.real == pytest.approx(np.sqrt(np.pi), rel=1e-9)


def test_gaussian_integral_in_the_plane():
    res = integrate(lambda x: np.exp(-np.sum(x ** 2, axis=1)), 2)
    assert res.value.real == pytest.approx(np.pi, rel=1e-8)


def test_sinc_squared_tail():
    # int (sin x / x)^2 dx = pi; slow 1/x^2 tail
    f = lambda x: np.sinc(x[:, 0] / np.pi) ** 2
    assert integrate(f, 1, QuadratureSpec(atol=1e-6, rtol=1e-6)).value.real == pytest.approx(np.pi, rel=1e-4)


def test_torus_trigonometric_polynomial_is_exact():
    f = lambda t: 2 + np.cos(3 * t[:, 0]) * np.cos(t[:, 1])
    assert integrate(f, 2, torus=True).value.real == pytest.approx(2 * (2 * np.pi) ** 2, rel=1e-12)


def test_non_integrable_raises():
    with pytest.raises(QuadratureDivergence):
        integrate(lambda x: np.ones(len(x)), 1, QuadratureSpec(max_radius=1e3))
