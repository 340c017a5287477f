import numpy as np
import pytest

from maxrigid import DomainTag, log_integral_verdict
from maxrigid.exceptions import Inconclusive
from maxrigid.spectral import ConstantDensity, DeepZeroDensity, OutsideBallDensity, PowerLawDensity


def test_exponentially_deep_zero_diverges():
    v = log_integral_verdict(DeepZeroDensity(1.0))
    assert v.divergent and v.classification == "deep_zero"


def test_shallow_zero_is_finite():
    v = log_integral_verdict(DeepZeroDensity(0.5))
    assert not v.divergent and v.order == pytest.approx(0.5, abs=0.05)


def test_gap_diverges():
    v = log_integral_verdict(OutsideBallDensity(1, 1.0))
    assert v.divergent and v.classification == "gap"


def test_off_centre_deep_zero_diverges():
    assert log_integral_verdict(DeepZeroDensity(1.0, center=2.0)).divergent


def test_plain_callable_is_accepted():
    v = log_integral_verdict(lambda u: np.exp(-np.abs(np.ravel(u)) ** 2) + 1e-3)
    assert not v.divergent


def test_near_boundary_order_is_inconclusive():
    with pytest.raises(Inconclusive):
        log_integral_verdict(DeepZeroDensity(0.9))


def test_lebesgue_on_the_circle_is_finite():
    assert not log_integral_verdict(ConstantDensity(1, 1.0), DomainTag.discrete(1)).divergent
