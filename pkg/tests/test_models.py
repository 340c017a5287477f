import numpy as np
import pytest
from scipy.integrate import quad

from maxrigid import QuadratureSpec, Cell, DomainTag, covariance_eval, variance_of_statistic
from maxrigid.models import (
    CombModel, GridSpec, TriangleModel, ball_autocorrelation, bessel_transform, comb_spectral_measure,
    count_in_cell, sample_comb, sample_gaussian_batch, triangle_spectral_density,
)


def test_ball_autocorrelation_in_one_dimension_is_a_triangle():
    h = np.linspace(0, 3, 31)
    np.testing.assert_allclose(ball_autocorrelation(1, h), np.maximum(2 - h, 0), atol=1e-12)


def test_ball_autocorrelation_in_the_plane():
    # lens area of two unit disks at distance h
    h = np.array([0.0, 0.5, 1.0, 1.7])
    lens = 2 * np.arccos(h / 2) - h / 2 * np.sqrt(4 - h ** 2)
    np.testing.assert_allclose(ball_autocorrelation(2, h), lens, rtol=1e-12)


def test_bessel_transform_is_the_ball_transform():
    # d = 1: transform of the indicator of [-1, 1]
    u = np.array([0.3, 1.0, 4.0])
    np.testing.assert_allclose(bessel_transform(1, u), 2 * np.sin(u) / u, rtol=1e-12)
    assert bessel_transform(3, np.array([0.0]))[0] == pytest.approx(4 * np.pi / 3)


def test_triangle_density_inverts_to_covariance():
    m = TriangleModel(d=1)
    x = np.array([[0.7]])
    # u^-2 oscillatory tail: a loose tolerance is what the extrapolation can settle
    got = covariance_eval(m.spectral_measure(), x, QuadratureSpec(atol=1e-6, rtol=1e-6))
    assert float(np.ravel(got)[0]) == pytest.approx(float(m.covariance(x)[0]), rel=1e-4)


@pytest.mark.slow
def test_planar_triangle_cell_variance_against_covariance_integral():
    m = TriangleModel(d=2)
    side = 0.5
    # Var M(cell) = int int C(x - y) over the cell, by Gauss-Legendre in 4 variables
    g, w = np.polynomial.legendre.leggauss(10)
    g, w = side * (g + 1) / 2, w * side / 2
    X = np.stack(np.meshgrid(g, g, g, g, indexing="ij"), -1).reshape(-1, 4)
    W = np.einsum("i,j,k,l->ijkl", w, w, w, w).ravel()
    direct = np.sum(W * m.covariance(X[:, :2] - X[:, 2:]))
    # the product-sinc transform decays slowly along the axes; the default
    # 1e-10 tolerance exceeds the evaluation budget on R^2
    got = variance_of_statistic(Cell([0.0, 0.0], side, DomainTag.continuous(2)), m.spectral_measure(),
                                QuadratureSpec(atol=1e-5, rtol=1e-5))
    assert got == pytest.approx(direct, rel=1e-3)


def test_triangle_density_is_fejer_kernel_in_one_dimension():
    # Fourier transform of (2 - |x|)_+ is 4 sin(u)^2 / u^2
    u = np.array([[0.4], [1.3], [5.0]])
    np.testing.assert_allclose(triangle_spectral_density(TriangleModel(d=1), u), 4 * np.sin(u[:, 0]) ** 2 / u[:, 0] ** 2,
                               rtol=1e-9)


def test_triangle_cell_variance_against_direct_double_integral():
    m = TriangleModel(d=1)
    side = 0.6
    direct = quad(lambda t: 2 * (side - t) * max(2 - t, 0), 0, side)[0]
    assert variance_of_statistic(Cell([0.0], side, DomainTag.continuous(1)), m.spectral_measure()) == pytest.approx(direct, rel=1e-6)


def test_comb_atoms_and_intensity():
    m = CombModel((1.0, np.sqrt(2)), truncation=8)
    S = comb_spectral_measure(m)
    assert m.intensity == pytest.approx(1 + 1 / np.sqrt(2))
    # lattice a Z: atoms at 2 pi k / a with weight 2 pi / a^2
    loc = S.atom_locations[:, 0]
    i = np.argmin(np.abs(loc - 2 * np.pi))
    assert S.atom_weights[i] == pytest.approx(2 * np.pi, rel=1e-12)
    assert np.all(S.atom_weights > 0)


def test_comb_counts_have_the_expected_mean(rng):
    m = CombModel((1.0, 1.5))
    counts = [count_in_cell(sample_comb(m, (-5.0, 5.0), rng), [0.0], 2.3) for _ in range(400)]
    assert np.mean(counts) == pytest.approx(2.3 * m.intensity, rel=0.05)


def test_gaussian_sampler_reproduces_covariance(rng):
    m = TriangleModel(d=1, scale=0.5)
    grid = GridSpec((0.0,), 0.25, (24,))
    fields = sample_gaussian_batch(m.kernel(), grid, 3000, rng)
    vals = np.asarray(fields).reshape(3000, -1)
    emp = np.mean(vals[:, 0] * vals[:, 4])
    assert emp == pytest.approx(0.5 * (2 - 1.0), abs=0.06)
    assert np.var(vals[:, 10]) == pytest.approx(1.0, abs=0.08)


def test_squared_triangle_density_two_routes():
    # q = 2, d = 1: transform of (2 - |x|)^2 on [-2, 2], and (J_1^2 * J_1^2) / (2 pi)
    m = TriangleModel(d=1, q=2)
    u = 2 * np.pi
    direct = 2 * quad(lambda x: (2 - x) ** 2 * np.cos(u * x), 0, 2, limit=200)[0]
    j2 = lambda v: 4 * np.sinc(v / np.pi) ** 2
    conv = quad(lambda v: j2(v) * j2(u - v), -400, 400, limit=2000, points=[0.0, u])[0] / (2 * np.pi)
    got = float(triangle_spectral_density(m, np.array([[u]]))[0])
    assert got > 0
    assert got == pytest.approx(direct, rel=1e-8)
    assert got == pytest.approx(conv, rel=1e-3)
