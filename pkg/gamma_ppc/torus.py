"""torus.py

Arithmetic on the unit torus [0, 1) with a dual representation: exact rationals
(:class:`~fractions.Fraction`, always in lowest terms) for the constructions, and Float64 for
statistical runs. Every function here is pure and works on either representation.
"""

import math
from fractions import Fraction
from typing import Iterable, Tuple, Union

import numpy as np

from .errors import PreconditionError
from .typing import CirclePoint, PointArray, PointsLike, RealLike
from .utils import to_fraction


def reduce_mod1(value: Union[CirclePoint, int]) -> CirclePoint:
    """Reduce a real number into [0, 1)

    Works for Fractions (result exact) and floats. A float like ``-1e-20`` would reduce to ``1.0``
    under ``%``; that case is folded back to ``0.0`` to keep the half-open invariant.
    """
    if isinstance(value, (Fraction, int)):
        return Fraction(value) % 1
    reduced = float(value) % 1.0
    return 0.0 if reduced == 1.0 else reduced


def to_circle_point(value: RealLike, exact: bool = True) -> CirclePoint:
    """Build a CirclePoint from any real-like input

    :param value: a number or a string such as ``"5/6"``
    :param exact: return an exact rational when `True`, a float otherwise
    :return: the value reduced mod 1
    """
    if exact:
        return reduce_mod1(to_fraction(value))
    if isinstance(value, str):
        value = to_fraction(value)
    return reduce_mod1(float(value))


def is_exact(points: PointsLike) -> bool:
    """True when the points are exact rationals (an empty tuple counts as exact)"""
    if isinstance(points, np.ndarray):
        return False
    return all(isinstance(p, (Fraction, int)) for p in points)


def as_points(points: PointsLike) -> PointArray:
    """Normalize a point collection: exact points become a tuple of Fractions, anything else a
    contiguous float64 array reduced mod 1"""
    if isinstance(points, np.ndarray):
        return np.mod(np.asarray(points, dtype=np.float64), 1.0)
    points = tuple(points)
    if is_exact(points):
        return tuple(Fraction(p) % 1 for p in points)
    return np.mod(np.asarray([float(p) for p in points], dtype=np.float64), 1.0)


def nearest_integer_distance(value: Union[CirclePoint, int]) -> CirclePoint:
    """‖x‖, the distance from `value` to its nearest integer, in [0, 1/2]"""
    if isinstance(value, (Fraction, int)):
        frac = Fraction(value) % 1
        return min(frac, 1 - frac)
    value = float(value)
    return abs(value - round(value))


def circle_distance(x: CirclePoint, y: CirclePoint) -> CirclePoint:
    """‖x − y‖, the torus metric; exact when both inputs are exact"""
    return nearest_integer_distance(x - y)


def shifted_distance(x: CirclePoint, y: CirclePoint, gamma: RealLike) -> CirclePoint:
    """‖x − y − γ‖

    The shift is taken exactly when both points are exact, otherwise as a float. The identities
    ``shifted_distance(x, y, γ) == shifted_distance(y, x, −γ) == shifted_distance(y, x, 1 − γ)``
    hold exactly in rational mode.
    """
    if isinstance(x, (Fraction, int)) and isinstance(y, (Fraction, int)):
        return nearest_integer_distance(Fraction(x) - Fraction(y) - to_fraction(gamma))
    shift = float(to_fraction(gamma)) if isinstance(gamma, str) else float(gamma)
    return nearest_integer_distance(float(x) - float(y) - shift)


def common_denominator(values: Iterable[Fraction]) -> int:
    """The least common multiple of the denominators of exact rationals"""
    denominator = 1
    for value in values:
        denominator = math.lcm(denominator, value.denominator)
    return denominator


def scale_to_integers(points: Iterable[Fraction], denominator: int) -> Tuple[int, ...]:
    """Map exact points to residues mod `denominator` (``x ↦ x·D mod D``)

    :raises PreconditionError: a point is not a multiple of ``1/denominator``
    """
    scaled = []
    for point in points:
        numerator = point * denominator
        if numerator.denominator != 1:
            raise PreconditionError(f'{point} is not a multiple of 1/{denominator}')
        scaled.append(numerator.numerator % denominator)
    return tuple(scaled)
