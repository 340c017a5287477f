import numpy as np
import pytest

from maxrigid.exceptions import ApproximantFailure
from maxrigid.rigidity import patch_polynomial
from maxrigid.rigidity.patching import analytic_approximant, ramp, ramp_approximant, sample_counterexample_set
from maxrigid.rigidity import counterexample_set


def const(c):
    return lambda t: np.full(np.shape(t), c, dtype=complex)


def test_constants_patch_exactly():
    H = patch_polynomial(const(0.25), const(0.25), 0.01, n_sample=500)
    assert H.error < 1e-10
    u = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(H(u, u), 0.0625, atol=1e-10)


def test_ramp_values():
    assert ramp(np.array([0.0]))[0] == 1.0 and ramp(np.array([np.pi]))[0] == 0.0
    np.testing.assert_allclose(ramp(np.array([0.5])), ramp(np.array([-0.5])))


def test_ramp_approximant_tolerance_on_arcs():
    coef = ramp_approximant(0.01)
    arcs = np.concatenate([np.linspace(-np.pi / 3, np.pi / 3, 501), np.pi + np.linspace(-np.pi / 3, np.pi / 3, 501)])
    phi = np.cos(np.outer(arcs, np.arange(len(coef)))) @ coef
    # the fit sample is 2000 arc points; a fresh grid may sit slightly above
    assert np.max(np.abs(phi - ramp(arcs))) <= 0.0105


@pytest.mark.slow
def test_conjugate_factor_at_wide_notch():
    H = patch_polynomial(lambda u: np.exp(1j * u) / 4, lambda v: np.exp(-1j * v) / 4, 0.01, eta=1.0, n_sample=500)
    assert H.error <= 0.04 + 1e-3
    # errors are measured on points of the counterexample set
    pts = sample_counterexample_set(200, 1.0, 0)
    assert np.all(counterexample_set(1.0)(pts))


def test_narrow_notch_is_infeasible():
    # an analytic approximant of v-bar off a notch of width 0.02 would need enormous size
    with pytest.raises(ApproximantFailure):
        analytic_approximant(np.conj, np.pi, 0.01, eta=0.01, k_max=32)
