import numpy as np
import pytest
from sklearn.base import clone

from maxrigid import BestLinearPredictor, DomainTag, PointMass, SpectralMeasure, grid_design, solve_predictor
from maxrigid.design import BallRegion
from maxrigid.predictor import classify_trend
from maxrigid.spectral import CustomDensity

A = 0.6
Z1 = DomainTag.discrete(1)


def _ar1():
    return SpectralMeasure(Z1, CustomDensity(lambda t: 1 / np.abs(1 - A * np.exp(1j * np.ravel(t))) ** 2, 1))


def _ar1_cov(k):
    return A ** np.abs(k) / (1 - A * A)


def test_white_noise_cannot_be_interpolated():
    des = grid_design(BallRegion(0.5), 1, 5, d=1, domain=Z1)
    res = solve_predictor(PointMass([0], Z1), des, SpectralMeasure.lebesgue(Z1))
    assert res.mse == pytest.approx(1.0, rel=1e-8)
    np.testing.assert_allclose(res.weights, 0, atol=1e-8)


def test_ar1_interpolation_error_matches_closed_form():
    # two-sided interpolation error 1 / ((2 pi)^-1 int 1/f) = 1 / (1 + a^2)
    des = grid_design(BallRegion(0.5), 1, 6, d=1, domain=Z1)
    res = solve_predictor(PointMass([0], Z1), des, _ar1())
    assert res.mse == pytest.approx(1 / (1 + A * A), rel=1e-7)


def test_ar1_weights_match_direct_gram_solve():
    des = grid_design(BallRegion(0.5), 1, 4, d=1, domain=Z1)
    sites = np.array([float(np.ravel(f.support_box()[0])[0]) for f in des.functionals])
    G = _ar1_cov(sites[:, None] - sites[None, :])
    b = _ar1_cov(sites)
    w = np.linalg.solve(G, b)
    res = solve_predictor(PointMass([0], Z1), des, _ar1(), reg=0.0)
    np.testing.assert_allclose(np.real(res.weights), w, atol=1e-7)
    assert res.mse == pytest.approx(_ar1_cov(0) - b @ w, rel=1e-7)


def test_estimator_api():
    des = grid_design(BallRegion(0.5), 1, 3, d=1, domain=Z1)
    est = BestLinearPredictor(PointMass([0], Z1), _ar1())
    assert clone(est).get_params()["reg"] == "auto"
    est.fit(des)
    assert est.n_features_in_ == len(des.functionals)
    X = np.random.default_rng(0).standard_normal((5, est.n_features_in_))
    assert est.predict(X).shape == (5,)
    assert est.mse_ == pytest.approx(1 / (1 + A * A), rel=1e-6)
    with pytest.raises(ValueError):
        est.predict(X[:, :2])
    with pytest.raises(ValueError):
        BestLinearPredictor().fit(des)


def test_trend_classification():
    assert classify_trend([1.0, 0.3, 0.05]) == "vanishing"
    assert classify_trend([1.0, 0.8, 0.799]) == "plateau"
    assert classify_trend([1.0, 0.8, 0.6]) == "undetermined"
    assert classify_trend([1.0]) == "undetermined"
