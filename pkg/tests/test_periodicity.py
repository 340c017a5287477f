import numpy as np
import pytest

from maxrigid import DomainTag, SpectralMeasure, covariance_eval
from maxrigid.rigidity import detect_period, find_period, periodic_pattern_spectrum, random_translate
from maxrigid.rigidity.periodicity import ValueSet


def test_value_set_rounding_breaks_ties_low():
    U = ValueSet([0.0, 1.0, 3.0])
    assert U.delta == 1.0
    assert U.round(0.5)[0] == 0.0 and U.round(2.0)[0] == 1.0 and U.round(2.6)[0] == 3.0


def test_find_period():
    x = np.tile(np.arange(3), 10)
    assert find_period(x) == (3,)
    assert find_period(np.arange(20)) is None
    p = np.random.default_rng(0).integers(0, 3, (3, 5))
    assert find_period(np.tile(p, (6, 4))) in ((3, 5), find_period(np.tile(p, (6, 4))))


def test_pattern_spectrum_reproduces_autocorrelation():
    rng = np.random.default_rng(1)
    p = rng.integers(0, 3, (4, 3)).astype(float)
    S = periodic_pattern_spectrum(p)
    for k in [(0, 0), (1, 0), (2, 1), (3, 2)]:
        direct = np.mean(p * np.roll(p, shift=(-k[0], -k[1]), axis=(0, 1)))
        assert covariance_eval(S, np.array([k], dtype=float)) == pytest.approx(direct, abs=1e-12)


@pytest.mark.parametrize("period,side", [((4,), 64), ((3, 5), 40)])
def test_period_recovered_from_window(period, side):
    rng = np.random.default_rng(7)
    pattern = rng.integers(0, 3, period).astype(float)
    while find_period(np.tile(pattern, [4] * len(period))) != period:
        pattern = rng.integers(0, 3, period).astype(float)
    window = random_translate(pattern, side, rng)
    rep = detect_period(window, [0, 1, 2], periodic_pattern_spectrum(pattern))
    assert rep.period == period and rep.propagation_failures == 0


def test_iid_control_fails_to_propagate():
    rng = np.random.default_rng(2)
    window = rng.integers(0, 3, 64).astype(float)
    rep = detect_period(window, [0, 1, 2], SpectralMeasure.lebesgue(DomainTag.discrete(1)))
    assert rep.period is None and rep.propagation_failures > 0


def test_window_too_small():
    with pytest.raises(ValueError):
        detect_period(np.zeros(20), [0, 1], SpectralMeasure.lebesgue(DomainTag.discrete(1)))
