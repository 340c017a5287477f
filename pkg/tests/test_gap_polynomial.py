import numpy as np
import pytest

from maxrigid.exceptions import NoCertificate
from maxrigid.rigidity import (
    arc_complement_sample, build_gap_polynomial, certify, counterexample_set, power_error_bound, sample_set,
    tensor_gap_polynomial,
)


def _dense_max(Q, half_gap, n=200000):
    t = np.linspace(half_gap, 2 * np.pi - half_gap, n)
    return float(np.max(np.abs(Q(t[:, None]))))


def test_wide_gap_certificate_holds_on_dense_grid():
    Q = build_gap_polynomial(arc_complement_sample(np.pi / 3, 400), k_max=20)
    assert Q.bound <= 0.5
    assert _dense_max(Q, np.pi / 3) <= Q.bound + 1e-12
    assert np.all(Q.freqs >= 1)


def test_power_expansion_matches_direct_power():
    Q = build_gap_polynomial(arc_complement_sample(np.pi / 2, 200), k_max=10)
    P = power_error_bound(Q, 3, 2.0)
    t = np.linspace(-np.pi, np.pi, 17)[:, None]
    direct = Q(t) ** 3
    via = 1 - np.exp(1j * t @ P.freqs.T) @ P.coefficients
    np.testing.assert_allclose(via, direct, atol=1e-10)
    assert P.bound == pytest.approx(2.0 / 64)


def test_narrow_gap_without_certificate():
    with pytest.raises(NoCertificate):
        build_gap_polynomial(arc_complement_sample(0.05, 400), k_max=6)


def test_certify_returns_an_upper_bound():
    supp = arc_complement_sample(np.pi / 3, 300)
    Q = build_gap_polynomial(supp, k_max=20)
    mx, slack = certify(Q.coefficients, Q.freqs, supp)
    assert mx + slack >= _dense_max(Q, np.pi / 3) - 1e-12


def test_tensor_product_of_corridors():
    supp = [arc_complement_sample(np.pi / 2, 200)] * 2
    Q = tensor_gap_polynomial(supp, k_max=20)
    g = np.linspace(np.pi / 2, 2 * np.pi - np.pi / 2, 120)
    pts = np.stack(np.meshgrid(g, g, indexing="ij"), -1).reshape(-1, 2)
    assert np.max(np.abs(Q(pts))) <= 0.5 + 1e-9


def test_counterexample_membership():
    member = counterexample_set(0.1)
    # notch at u = 0 is excluded for every v
    assert not member(np.array([[0.0, 1.0]]))[0]
    assert member(np.array([[1.0, 0.5]]))[0]
    pts = sample_set(member, 40).points
    assert pts.shape[1] == 2 and np.all(member(pts))
