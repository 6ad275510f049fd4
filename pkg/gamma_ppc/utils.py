"""utils.py

Helper functions for use in other modules
"""

from copy import deepcopy
from fractions import Fraction
from itertools import filterfalse
from math import isqrt
from numbers import Rational, Real
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from .errors import PreconditionError
from .typing import RealLike


class cached_property():  # pylint: disable=too-few-public-methods,invalid-name
    """Cache a derived attribute on first access, in place of `@property`

    Used for the sorted and extended arrays of the pair counters, which every query reuses.
    The docstring of the decorated function is forwarded.
    """

    def __init__(self, func: Callable) -> None:
        self.__doc__ = getattr(func, '__doc__')
        self.func = func

    def __get__(self, obj: Any, cls: type) -> Any:
        if obj is None:
            return self
        value = obj.__dict__[self.func.__name__] = self.func(obj)
        return value


def not_none(data: Dict[Any, Any]) -> Dict[Any, Any]:
    """Return the passed in dictionary after removing any keys whose value is `None`"""
    return dict(filterfalse(lambda x: x[1] is None, data.items()))


def merge(first: Dict[Any, Any], second: Dict[Any, Any]) -> Dict[Any, Any]:
    """Utility function to merge the keys and values of two dicts recursively

    :param first: source dict to start with
    :param second: dict to merge in, any keys that appear in both will be overwritten from this one
    :return: The merged dictionary or `second` if it wasn't a dict

    If the second argument is not a :class:`dict` or a subtype of it, it is just returned. The
    first argument will be deep copied using :func:`~copy.deepcopy` and then the keys and values
    from second will be recursively `deepcopy`'d into it before returning. Keys mapped to `None`
    in `second` are skipped so that unset command line flags never clobber file values.
    """
    if not isinstance(second, dict):
        return second
    result = deepcopy(first)
    for key, value in second.items():
        if value is None:
            continue
        if key in result and isinstance(result[key], dict):
            result[key] = merge(result[key], value)
        else:
            result[key] = deepcopy(value)
    return result


def to_fraction(value: RealLike) -> Fraction:
    """Parse a real parameter into an exact :class:`~fractions.Fraction`

    Strings are parsed as rationals or decimals (``"1/3"``, ``"0.25"``, ``"3"``). Floats are read
    through their shortest decimal representation, so ``0.3`` becomes ``3/10`` rather than the
    binary value nearest to it.

    :raises PreconditionError: the value is not a finite real
    """
    if isinstance(value, bool):
        raise PreconditionError(f'expected a real number, got {value!r}')
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    try:
        if isinstance(value, str):
            return Fraction(value.strip())
        if isinstance(value, Real):
            return Fraction(repr(float(value)))
    except (ValueError, ZeroDivisionError) as err:
        raise PreconditionError(f'expected a finite real number, got {value!r}') from err
    raise PreconditionError(f'expected a real number, got {value!r}')


def format_real(value: Any) -> Any:
    """Render a number for CSV/JSON output: exact rationals as ``p/q``, floats via `repr`"""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return value


def exact_sqrt(value: Fraction) -> Optional[Fraction]:
    """Return the exact square root of a nonnegative rational, or `None` if it is irrational"""
    if value < 0:
        return None
    num, den = isqrt(value.numerator), isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def power_of_two_exponent(value: Fraction) -> Optional[int]:
    """Return `i` if ``value == 2**-i`` for an integer ``i >= 0``, else `None`"""
    if value.numerator != 1 or value.denominator & (value.denominator - 1):
        return None
    return value.denominator.bit_length() - 1


def tail_half(items: List[Any]) -> List[Any]:
    """The final half of a list, rounding the half up so a single element is its own tail"""
    return items[len(items) // 2:]


def pairwise(items: Iterable[Any]) -> Iterable[Tuple[Any, Any]]:
    """Yield consecutive overlapping pairs ``(a, b), (b, c), ...``"""
    iterator = iter(items)
    try:
        prev = next(iterator)
    except StopIteration:
        return
    for item in iterator:
        yield prev, item
        prev = item
