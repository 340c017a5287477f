import numpy as np
import pytest

from maxrigid import Cell, DomainTag, variance_of_statistic
from maxrigid.models import CombModel, comb_spectral_measure, comb_tail_bound, count_in_cell, discretized_spectral_measure, sample_comb


def _exact_count_variance(a, t):
    # one shifted lattice a(U + Z): the count in [0, t) is floor or ceil of t / a
    p = (t / a) % 1.0
    return p * (1 - p)


def test_single_lattice_count_variance_from_atoms():
    m = CombModel((1.3,), truncation=400)
    S = comb_spectral_measure(m)
    v = variance_of_statistic(Cell([0.0], 0.5, DomainTag.continuous(1)), S)
    assert v + comb_tail_bound(m) >= _exact_count_variance(1.3, 0.5) - 1e-12
    assert v == pytest.approx(_exact_count_variance(1.3, 0.5), abs=comb_tail_bound(m) + 1e-9)


def test_discretized_mass_is_cell_variance():
    m = CombModel((1.0, np.sqrt(2)), truncation=64)
    S = comb_spectral_measure(m)
    D = discretized_spectral_measure(S, 0.7)
    v = variance_of_statistic(Cell([0.0], 0.7, DomainTag.continuous(1)), S)
    assert D.total_mass() / (2 * np.pi) == pytest.approx(v, rel=1e-10)
    assert np.all(np.abs(D.atom_locations) <= np.pi)


def test_sample_counts_match_superposition(rng):
    m = CombModel((1.0, 1.7))
    pts = sample_comb(m, (0.0, 100.0), rng)
    # each lattice contributes its points to the window
    assert count_in_cell(pts, [0.0], 100.0) in range(100 + 58, 100 + 60)


def test_discretizing_torus_measure_rejected():
    with pytest.raises(ValueError):
        discretized_spectral_measure(comb_spectral_measure(CombModel()).__class__.lebesgue(DomainTag.discrete(1)), 1.0)
