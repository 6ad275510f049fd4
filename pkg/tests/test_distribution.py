# pylint: disable=missing-module-docstring,missing-function-docstring
from fractions import Fraction

import pytest

from gamma_ppc.distribution import (alp_diagnostic, empirical_cdf, histogram_density, ks_critical_value,
                                    ks_density, ks_uniform)
from gamma_ppc.errors import PreconditionError
from gamma_ppc.sequences import sample_density

F = Fraction


def test_empirical_cdf():
    cdf = empirical_cdf([0.1, 0.6], [0.5, 1])
    assert cdf.counts == (1, 2)
    assert cdf.values == (F(1, 2), 1)
    assert cdf.n == 2

def test_empirical_cdf_exact(vdc_points):
    cdf = empirical_cdf(vdc_points(4), ['1/4', '1/2', 1])
    assert cdf.values == (F(1, 2), F(3, 4), 1)
    assert cdf.grid == (0.25, 0.5, 1.0)

@pytest.mark.parametrize('grid', [[], [0.5], [0.5, 0.25, 1], [-0.1, 1]])
def test_empirical_cdf_bad_grid(grid):
    with pytest.raises(PreconditionError):
        empirical_cdf([0.1, 0.6], grid)

def test_empirical_cdf_needs_points():
    with pytest.raises(PreconditionError):
        empirical_cdf([], [1])

def test_histogram_density(vdc_points):
    assert histogram_density(vdc_points(64), 8).values == (1,) * 8
    estimate = histogram_density([0.0, 0.99, 0.1, 0.2], 2)
    assert estimate.values == (F(3, 2), F(1, 2))
    assert estimate.mass() == 1
    with pytest.raises(PreconditionError):
        histogram_density([0.5], 0)

def test_ks_uniform_on_a_grid(vdc_points):
    result = ks_uniform(vdc_points(1024))
    assert result.statistic == pytest.approx(1 / 1024)
    assert result.n == 1024

def test_ks_density(thm1_density):
    sample = sample_density(thm1_density, 5000, seed=3).points
    assert ks_density(sample, thm1_density).pvalue > 0.001
    assert ks_uniform(sample).statistic > 0.6

def test_ks_critical_value():
    assert ks_critical_value(100, 0.05) == pytest.approx(0.134, abs=2e-3)
    assert ks_critical_value(10_000) < ks_critical_value(100)
    with pytest.raises(PreconditionError):
        ks_critical_value(0)
    with pytest.raises(PreconditionError):
        ks_critical_value(10, 1.5)

def test_alp_diagnostic(vdc_points):
    diagnostic = alp_diagnostic(vdc_points(1024), 1, 8)
    assert diagnostic.r2 == 2
    assert diagnostic.r2_over_2s == 1
    assert diagnostic.l2_norm_squared == 1
    assert diagnostic.ratio == pytest.approx(1.0)

def test_alp_diagnostic_concentrated(thm1_density):
    sample = sample_density(thm1_density, 20_000, seed=1).points
    diagnostic = alp_diagnostic(sample, 1, 16)
    assert diagnostic.l2_norm_squared > 2
    assert diagnostic.ratio > 0.5
