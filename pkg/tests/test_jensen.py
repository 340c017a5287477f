import numpy as np
import pytest

from maxrigid.exceptions import ClusteredZeros
from maxrigid.rigidity import jensen_zero_density, radial_bessel


def test_cosine_density():
    est = jensen_zero_density(np.cos, 200.0, 0.01)
    assert est.estimate == pytest.approx(2 / np.pi, rel=0.02)
    # zeros polished to the true roots
    np.testing.assert_allclose(np.cos(est.zeros), 0, atol=1e-9)


def test_zero_free_function():
    assert jensen_zero_density(lambda t: 1 + 0 * t, 50.0).estimate == 0


@pytest.mark.parametrize("rho", [1.0, 0.5])
def test_radial_bessel_density_is_bounded_by_type(rho):
    est = jensen_zero_density(radial_bessel(1, rho), 1000.0, 0.01)
    assert est.estimate == pytest.approx(2 * rho / np.pi, rel=0.02)
    assert est.estimate <= rho * 1.03


def test_three_dimensional_profile_has_zeros_at_tan_roots():
    est = jensen_zero_density(radial_bessel(3, 1.0), 60.0, 0.01)
    z = est.zeros[est.zeros > 0]
    np.testing.assert_allclose(np.tan(z), z, rtol=1e-6)


def test_clustered_zeros_raise():
    # two roots 2e-7 apart straddling a grid point stay split at every refinement
    with pytest.raises(ClusteredZeros):
        jensen_zero_density(lambda t: (t - 10.0) ** 2 - 1e-14, 20.0, 0.01, max_refine=2)


def test_csv_has_expected_columns():
    text = jensen_zero_density(np.cos, 20.0).to_csv()
    assert text.splitlines()[0] == "T,n_T,n_T_over_T"
