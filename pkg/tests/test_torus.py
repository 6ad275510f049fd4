# pylint: disable=missing-module-docstring,missing-function-docstring
from fractions import Fraction

import numpy as np
import pytest

from gamma_ppc.errors import PreconditionError
from gamma_ppc.torus import (as_points, circle_distance, common_denominator, is_exact,
                             nearest_integer_distance, reduce_mod1, scale_to_integers,
                             shifted_distance, to_circle_point)


@pytest.mark.parametrize('x, y, expected', [
    (0.25, 0.75, 0.5),
    (0.3, 0.3, 0.0),
    (0.95, 0.10, 0.15),
])
def test_circle_distance_float(x, y, expected):
    assert circle_distance(x, y) == pytest.approx(expected)
    assert circle_distance(y, x) == pytest.approx(expected)

def test_circle_distance_exact():
    assert circle_distance(Fraction(19, 20), Fraction(1, 10)) == Fraction(3, 20)
    assert circle_distance(Fraction(1, 4), Fraction(3, 4)) == Fraction(1, 2)
    assert isinstance(circle_distance(Fraction(1, 3), Fraction(1, 7)), Fraction)

def test_circle_distance_is_a_metric():
    rng = np.random.default_rng(3)
    for x, y, z in rng.random((200, 3)):
        assert 0 <= circle_distance(x, y) <= 0.5
        assert circle_distance(x, z) <= circle_distance(x, y) + circle_distance(y, z) + 1e-15

@pytest.mark.parametrize('x, y, gamma, expected', [
    (0.5, 0.0, 0.5, 0.0),
    (0.0, 0.0, 0.3, 0.3),
    (0.9, 0.2, 0.25, 0.45),
])
def test_shifted_distance(x, y, gamma, expected):
    assert shifted_distance(x, y, gamma) == pytest.approx(expected)

def test_shifted_distance_symmetry_is_exact():
    x, y, gamma = Fraction(1, 3), Fraction(5, 7), Fraction(2, 11)
    assert shifted_distance(x, y, gamma) == shifted_distance(y, x, -gamma) == shifted_distance(y, x, 1 - gamma)

def test_shifted_distance_string_shift():
    assert shifted_distance(Fraction(1, 2), Fraction(0), '1/3') == Fraction(1, 6)

def test_nearest_integer_distance():
    assert nearest_integer_distance(Fraction(3, 4)) == Fraction(1, 4)
    assert nearest_integer_distance(Fraction(-7, 5)) == Fraction(2, 5)
    assert nearest_integer_distance(-0.3) == pytest.approx(0.3)
    assert nearest_integer_distance(2) == 0

def test_reduce_mod1_keeps_half_open_interval():
    assert reduce_mod1(-1e-20) == 0.0
    assert reduce_mod1(Fraction(5, 4)) == Fraction(1, 4)
    assert reduce_mod1(Fraction(-1, 4)) == Fraction(3, 4)

def test_to_circle_point():
    assert to_circle_point('5/4') == Fraction(1, 4)
    assert to_circle_point(0.3) == Fraction(3, 10)
    assert to_circle_point('0.3', exact=False) == 0.3
    with pytest.raises(PreconditionError):
        to_circle_point('one half')
    with pytest.raises(PreconditionError):
        to_circle_point(True)

def test_as_points():
    exact = as_points([Fraction(1, 2), Fraction(3, 2)])
    assert exact == (Fraction(1, 2), Fraction(1, 2))
    assert is_exact(exact)
    floats = as_points([0.25, 1.5])
    assert isinstance(floats, np.ndarray)
    assert floats.tolist() == [0.25, 0.5]
    assert not is_exact(floats)

def test_scale_to_integers():
    points = (Fraction(1, 6), Fraction(1, 4))
    assert common_denominator(points) == 12
    assert scale_to_integers(points, 12) == (2, 3)
    with pytest.raises(PreconditionError):
        scale_to_integers((Fraction(1, 5),), 12)
