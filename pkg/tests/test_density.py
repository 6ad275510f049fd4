# pylint: disable=missing-module-docstring,missing-function-docstring,redefined-outer-name
from fractions import Fraction

import numpy as np
import pytest

from gamma_ppc.density import (PiecewiseConstantDensity, density_overlap, difference_density,
                               expected_r2, theorem1_density, theorem3_density, uniform_density)
from gamma_ppc.errors import ConfigValidationError, DensityError, PreconditionError

F = Fraction


def test_theorem1_values(thm1_density):
    assert thm1_density.breakpoints == (0, F(1, 16), F(1, 4), F(5, 16), 1)
    assert thm1_density.values == (4, F(8, 3), 4, 0)
    assert thm1_density.is_exact
    assert thm1_density.mass() == 1

def test_theorem1_half_branch():
    g = theorem1_density(F(1, 2), F(1, 8))
    assert g.breakpoints == (0, F(1, 8), F(1, 2), F(5, 8), 1)
    assert g.values == (2, F(4, 3), 2, 0)

def test_theorem1_irrational_root_falls_back_to_floats():
    g = theorem1_density(F(1, 3), F(1, 6))
    assert not g.is_exact
    assert abs(g.mass() - 1) <= 1e-12
    assert abs(density_overlap(g, F(1, 3)) - 1) <= 1e-12

@pytest.mark.parametrize('gamma, delta', [
    (F(1, 4), F(1, 4)),
    (F(1, 4), F(0)),
    (F(2, 5), F(1, 4)),
    (F(1, 2), F(1, 2)),
    (F(3, 5), F(1, 10)),
])
def test_theorem1_preconditions(gamma, delta):
    with pytest.raises(PreconditionError):
        theorem1_density(gamma, delta)

def test_theorem1_overlaps(thm1_density):
    assert density_overlap(thm1_density, F(1, 4)) == 1
    assert density_overlap(thm1_density, 0) == F(10, 3)
    assert density_overlap(thm1_density, F(3, 4)) == 1

def test_theorem1_overlap_is_one_on_both_branches():
    grid = [(gamma, gamma / k) for gamma in (F(1, 8), F(1, 5), F(1, 4), F(1, 3)) for k in (2, 3, 4)]
    grid += [(F(1, 2), delta) for delta in (F(1, 3), F(1, 4), F(1, 8), F(1, 16), F(1, 50))]
    for gamma, delta in grid:
        assert abs(density_overlap(theorem1_density(gamma, delta), gamma) - 1) <= 1e-12

def test_theorem3_density():
    g = theorem3_density(F(1, 4), F(1, 16))
    assert g.values == (8, 0, 8, 0)
    assert density_overlap(g, F(1, 4)) == 4
    for gamma, epsilon in ((F(1, 8), F(1, 16)), (F(3, 8), F(1, 32))):
        assert density_overlap(theorem3_density(gamma, epsilon), gamma) == 1 / (4 * epsilon)

@pytest.mark.parametrize('gamma, epsilon', [
    (F(1, 4), F(1, 4)),
    (F(1, 4), F(3, 32)),
    (F(1, 2), F(1, 2)),
])
def test_theorem3_preconditions(gamma, epsilon):
    with pytest.raises(PreconditionError):
        theorem3_density(gamma, epsilon)

def test_uniform_overlap_is_one():
    g = uniform_density()
    for gamma in (0, F(1, 7), F(3, 10), F(1, 2)):
        assert density_overlap(g, gamma) == 1

def test_overlap_symmetry_and_cauchy_schwarz(thm1_density):
    densities = [thm1_density, theorem3_density(F(1, 4), F(1, 16)),
                 PiecewiseConstantDensity([0, '1/3', 1], ['3/2', '3/4'])]
    for g in densities:
        assert density_overlap(g, 0) > 1
        for gamma in (F(1, 10), F(1, 3), F(5, 8)):
            assert density_overlap(g, gamma) == density_overlap(g, 1 - gamma)
    float_density = PiecewiseConstantDensity([0.0, 0.3, 1.0], [2.0, 4 / 7])
    assert abs(density_overlap(float_density, 0.2) - density_overlap(float_density, 0.8)) <= 1e-12

@pytest.mark.parametrize('breakpoints, values', [
    ([0, 1], []),
    ([0, '1/2', '1/2', 1], [1, 1, 1]),
    (['1/4', 1], ['4/3']),
    ([0, '1/2', 1], [-1, 3]),
    ([0, '1/2', 1], [1, '3/2']),
    ([0.0, 0.5, 1.0], [1.0, 1.1]),
])
def test_invalid_densities(breakpoints, values):
    with pytest.raises(DensityError):
        PiecewiseConstantDensity(breakpoints, values)

def test_pdf_and_cdf(thm1_density):
    assert thm1_density.pdf(F(1, 32)) == 4
    assert thm1_density.pdf(F(33, 32)) == 4
    assert thm1_density.pdf(F(1, 2)) == 0
    assert thm1_density.cdf(1 / 16) == pytest.approx(0.25)
    assert thm1_density.cdf(1.0) == 1.0
    assert thm1_density.cdf(np.array([0.0, 0.25, 0.5])).tolist() == pytest.approx([0.0, 0.75, 1.0])
    assert uniform_density().cdf(0.3) == pytest.approx(0.3)
    assert thm1_density.l2_norm_squared() == F(10, 3)

def test_json_documents(thm1_density):
    document = thm1_density.to_json()
    assert document == {'breakpoints': ['0', '1/16', '1/4', '5/16', '1'], 'values': ['4', '8/3', '4', '0']}
    assert PiecewiseConstantDensity.from_json(document) == thm1_density
    with pytest.raises(ConfigValidationError) as excinfo:
        PiecewiseConstantDensity.from_json({'breakpoints': [0, 'x'], 'values': [1]})
    assert excinfo.value.path == 'breakpoints[1]'

def test_expected_r2():
    assert expected_r2(uniform_density(), 0, 1, 10) == F(9, 5)
    assert expected_r2(uniform_density(), F(1, 2), 5, 10) == 9
    with pytest.raises(PreconditionError):
        expected_r2(uniform_density(), 0, 1, 1)

def test_expected_r2_tends_to_the_overlap_limit(thm1_density):
    n = 10 ** 6
    assert float(expected_r2(thm1_density, F(1, 4), 1, n)) == pytest.approx(2, abs=1e-4)
    assert float(expected_r2(thm1_density, 0, 1, n)) == pytest.approx(20 / 3, abs=1e-3)

def test_difference_density_is_the_overlap(thm1_density):
    assert difference_density(thm1_density, F(1, 8)) == density_overlap(thm1_density, F(1, 8))
