"""density.py

Piecewise-constant probability densities on [0, 1) and their exact overlap integrals
``d(γ) = ∫₀¹ g(x)·g({x + γ}) dx``.

A density keeps its breakpoints and values in whatever representation it was built with. When
every number is a :class:`~fractions.Fraction` all integrals are exact; otherwise they are
computed in Float64 by the same interval splitting, never by quadrature.
"""

import logging
import math
from bisect import bisect_right
from fractions import Fraction
from numbers import Real
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from .errors import DensityError, PreconditionError
from .serialization import DensitySchema
from .typing import RealLike
from .utils import exact_sqrt, pairwise, power_of_two_exponent, to_fraction
from .validation import DENSITY_SCHEMA, validate_document

LOGGER = logging.getLogger('gamma_ppc.density')

#: tolerance on the total mass of a density that carries floats
MASS_TOLERANCE = 1e-12

Number = Union[Fraction, float]


def _parse_number(value: Any) -> Number:
    """Strings and ints become exact rationals, JSON floats stay floats"""
    if isinstance(value, (str, int, Fraction)) and not isinstance(value, bool):
        return to_fraction(value)
    if isinstance(value, Real):
        return float(value)
    raise DensityError(f'expected a number, got {value!r}')


class PiecewiseConstantDensity():
    """A probability density on [0, 1) that is constant on each of a finite number of intervals

    The density is extended 1-periodically whenever it is evaluated outside [0, 1).

    :param breakpoints: strictly increasing, starting at 0 and ending at 1
    :param values: one nonnegative value per interval ``[breakpoints[i], breakpoints[i+1])``
    :raises DensityError: if any of the above fails, or the total mass is not 1
    """

    def __init__(self, breakpoints: Sequence[RealLike], values: Sequence[RealLike]) -> None:
        self._breakpoints = tuple(_parse_number(b) for b in breakpoints)
        self._values = tuple(_parse_number(v) for v in values)
        self._validate()

    def _validate(self) -> None:
        points, values = self._breakpoints, self._values
        if len(points) < 2:
            raise DensityError('a density needs at least the breakpoints 0 and 1')
        if len(values) != len(points) - 1:
            raise DensityError(f'expected {len(points) - 1} values for {len(points)} breakpoints, '
                               f'got {len(values)}')
        if points[0] != 0 or points[-1] != 1:
            raise DensityError('breakpoints must start at 0 and end at 1')
        for left, right in pairwise(points):
            if not left < right:
                raise DensityError(f'zero-length or decreasing interval [{left}, {right})')
        if any(value < 0 for value in values):
            raise DensityError('density values must be nonnegative')
        mass = self.mass()
        if self.is_exact:
            if mass != 1:
                raise DensityError(f'density integrates to {mass}, not 1')
        elif abs(mass - 1) > MASS_TOLERANCE:
            raise DensityError(f'density integrates to {mass!r}, not 1 (tolerance {MASS_TOLERANCE})')

    @property
    def breakpoints(self) -> Tuple[Number, ...]:
        """The interval endpoints, from 0 to 1"""
        return self._breakpoints

    @property
    def values(self) -> Tuple[Number, ...]:
        """The constant value of the density on each interval"""
        return self._values

    @property
    def is_exact(self) -> bool:
        """True when both breakpoints and values are exact rationals"""
        return all(isinstance(x, Fraction) for x in self._breakpoints + self._values)

    def intervals(self) -> Iterable[Tuple[Number, Number, Number]]:
        """Yield ``(left, right, value)`` for every interval"""
        for (left, right), value in zip(pairwise(self._breakpoints), self._values):
            yield left, right, value

    def mass(self) -> Number:
        """∫₀¹ g, exactly when the density is exact"""
        return sum(((right - left) * value for left, right, value in self.intervals()), Fraction(0))

    def pdf(self, x: Number) -> Number:
        """g(x) with g extended 1-periodically"""
        x = x % 1
        return self._values[bisect_right(self._breakpoints, x) - 1]

    def cumulative_masses(self) -> np.ndarray:
        """G at every breakpoint as a float array starting at 0 and ending at 1

        Entries from the right end of the last interval with positive mass onwards are exactly 1,
        so an inverse-CDF lookup of u < 1 never lands in a trailing zero-mass interval.
        """
        masses = np.array([float((right - left) * value) for left, right, value in self.intervals()])
        cdf = np.concatenate(([0.0], np.cumsum(masses)))
        last_positive = int(np.flatnonzero(masses > 0)[-1])
        cdf[last_positive + 1:] = 1.0
        return cdf

    def cdf(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """The distribution function G(x) = ∫₀ˣ g on [0, 1], vectorized"""
        edges = np.asarray(self._breakpoints, dtype=np.float64)
        values = np.asarray(self._values, dtype=np.float64)
        cumulative = self.cumulative_masses()
        clipped = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
        index = np.clip(np.searchsorted(edges, clipped, side='right') - 1, 0, len(values) - 1)
        result = np.minimum(cumulative[index] + (clipped - edges[index]) * values[index], 1.0)
        return float(result) if np.ndim(result) == 0 else result

    def l2_norm_squared(self) -> Number:
        """∫₀¹ g², the overlap at shift 0"""
        return sum(((right - left) * value * value for left, right, value in self.intervals()), Fraction(0))

    def to_json(self) -> Dict[str, List[Any]]:
        """``{"breakpoints": [...], "values": [...]}`` with exact rationals as ``"p/q"`` strings"""
        return dict(DensitySchema().dump(self))

    @classmethod
    def from_json(cls, document: Dict[str, Any]) -> 'PiecewiseConstantDensity':
        """Inverse of :meth:`to_json`, validated against the density JSON schema first

        :raises ConfigValidationError: the document does not match the schema
        :raises DensityError: the document is well formed but not a valid density
        """
        validate_document(DENSITY_SCHEMA, document)
        return cls(document['breakpoints'], document['values'])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewiseConstantDensity):
            return NotImplemented
        return self._breakpoints == other.breakpoints and self._values == other.values

    def __hash__(self) -> int:
        return hash((self._breakpoints, self._values))

    def __repr__(self) -> str:
        pieces = ', '.join(f'[{left}, {right}): {value}' for left, right, value in self.intervals())
        return f'PiecewiseConstantDensity({pieces})'


def uniform_density() -> PiecewiseConstantDensity:
    """g ≡ 1"""
    return PiecewiseConstantDensity([Fraction(0), Fraction(1)], [Fraction(1)])


def _shift_for(gamma: RealLike) -> Number:
    """Exact shifts stay exact, float shifts stay floats; both reduced mod 1"""
    if isinstance(gamma, (Fraction, int, str)):
        return to_fraction(gamma) % 1
    return float(gamma) % 1.0


def density_overlap(g: PiecewiseConstantDensity, gamma: RealLike) -> Number:
    """∫₀¹ g(x)·g({x + γ}) dx by exact interval splitting

    [0, 1) is cut at every breakpoint of g and at every breakpoint shifted by −γ mod 1, so both
    factors are constant on each piece; the integral is the sum of value products times lengths.
    Exact when g and γ are exact.

    :param g: a valid density
    :param gamma: the shift, any real (reduced mod 1)
    :return: the overlap d(γ)
    """
    if not isinstance(g, PiecewiseConstantDensity):
        raise DensityError(f'expected a PiecewiseConstantDensity, got {type(g).__name__}')
    shift = _shift_for(gamma)
    inner = g.breakpoints[:-1]
    cuts = sorted(set(inner) | {(b - shift) % 1 for b in inner})
    cuts.append(g.breakpoints[-1])
    total = Fraction(0)
    for left, right in pairwise(cuts):
        if not left < right:
            continue
        middle = (left + right) / 2
        total += (right - left) * g.pdf(middle) * g.pdf(middle + shift)
    return total


def difference_density(g: PiecewiseConstantDensity, t: RealLike) -> Number:
    """The density d(t) of X_m − X_n (mod 1) for independent X_m, X_n with density g"""
    return density_overlap(g, t)


def expected_r2(g: PiecewiseConstantDensity, gamma: RealLike, s: RealLike, n: int) -> Number:
    """Finite-N expectation of R₂(γ; s, N) for N i.i.d. samples from g

    Equal to ``(N − 1)·∫_{‖t − γ‖ ≤ s/N} d(t) dt``. d is piecewise linear with kinks at the
    pairwise breakpoint differences, so the trapezoid rule on the pieces between kinks is exact.

    :raises PreconditionError: n < 2 or s ≤ 0
    """
    if n < 2:
        raise PreconditionError('the expectation needs at least two points')
    scale = to_fraction(s) if isinstance(s, (Fraction, int, str)) else float(s)
    if scale <= 0:
        raise PreconditionError('s must be positive')
    radius = scale / n
    if radius >= Fraction(1, 2):
        return Fraction(n - 1) if isinstance(radius, Fraction) else float(n - 1)
    center = _shift_for(gamma)
    low, high = center - radius, center + radius
    inner = g.breakpoints[:-1]
    kinks = {(b - a) % 1 for a in inner for b in inner}
    knots = {low, high}
    for kink in kinks:
        for lift in (-1, 0, 1):
            if low < kink + lift < high:
                knots.add(kink + lift)
    ordered = sorted(knots)
    integral = sum(((right - left) * (density_overlap(g, left) + density_overlap(g, right)) / 2
                    for left, right in pairwise(ordered)), Fraction(0))
    LOGGER.debug('expected_r2: %d knots in [%s, %s]', len(ordered), low, high)
    return (n - 1) * integral


def _checked_fraction(name: str, value: RealLike) -> Fraction:
    try:
        return to_fraction(value)
    except PreconditionError as err:
        raise PreconditionError(f'{name}: {err}') from err


def theorem1_density(gamma: RealLike, delta: RealLike) -> PiecewiseConstantDensity:
    """A non-uniform density whose overlap at γ is exactly 1

    For 0 < γ < 1/2 (needs 0 < δ < γ and δ < 1 − 2γ) the density is 1/√δ on [0, δ) ∪ [γ, γ + δ),
    (1 − 2√δ)/(γ − δ) on [δ, γ) and 0 elsewhere. For γ = 1/2 (needs 0 < δ < 1/2) it is 1/√(2δ)
    on [0, δ) ∪ [γ, γ + δ), (1 − √(2δ))/(γ − δ) on [δ, γ) and 0 elsewhere. Values are exact
    rationals whenever the square root is rational, floats otherwise.

    The middle value is only nonnegative for δ ≤ 1/4 when γ < 1/2, so that bound is enforced too.

    :raises PreconditionError: the parameter constraints are violated
    """
    gamma = _checked_fraction('gamma', gamma)
    delta = _checked_fraction('delta', delta)
    half = Fraction(1, 2)
    if not 0 < gamma <= half:
        raise PreconditionError(f'gamma must lie in (0, 1/2], got {gamma}')
    if gamma == half:
        if not 0 < delta < half:
            raise PreconditionError(f'for gamma = 1/2 delta must lie in (0, 1/2), got {delta}')
        radicand, spikes = 2 * delta, 1
    else:
        if not 0 < delta < gamma:
            raise PreconditionError(f'delta must satisfy 0 < delta < gamma, got delta={delta}, gamma={gamma}')
        if not delta < 1 - 2 * gamma:
            raise PreconditionError(f'delta must satisfy delta < 1 - 2*gamma, got delta={delta}, gamma={gamma}')
        if delta > Fraction(1, 4):
            raise PreconditionError(f'delta must be at most 1/4 for a nonnegative density, got {delta}')
        radicand, spikes = delta, 2
    root = exact_sqrt(radicand)
    if root is not None:
        values = [1 / root, (1 - spikes * root) / (gamma - delta), 1 / root, Fraction(0)]
    else:
        float_root = math.sqrt(radicand)
        values = [1 / float_root, (1 - spikes * float_root) / float(gamma - delta), 1 / float_root, 0.0]
    return PiecewiseConstantDensity([Fraction(0), delta, gamma, gamma + delta, Fraction(1)], values)


def theorem3_density(gamma: RealLike, epsilon: RealLike) -> PiecewiseConstantDensity:
    """The limit density 1/(2ε) on [0, ε] ∪ [γ, γ + ε] of the interleaved construction

    :param gamma: a shift in (0, 1/2)
    :param epsilon: ``2**-i`` with ε < min{(1/2)(1/2 − γ), γ}
    :raises PreconditionError: the parameter constraints are violated
    """
    gamma = _checked_fraction('gamma', gamma)
    epsilon = _checked_fraction('epsilon', epsilon)
    check_theorem3_parameters(gamma, epsilon, allow_half=False)
    height = 1 / (2 * epsilon)
    return PiecewiseConstantDensity([Fraction(0), epsilon, gamma, gamma + epsilon, Fraction(1)],
                                    [height, Fraction(0), height, Fraction(0)])


def check_theorem3_parameters(gamma: Fraction, epsilon: Fraction, allow_half: bool = True) -> None:
    """Validate (γ, ε) for the interleaved construction

    Either γ = 1/2 with ε = 1/2 (only if `allow_half`), or 0 < γ < 1/2 with ε = 2**-i, i ≥ 1, and
    ε < min{(1/2)(1/2 − γ), γ}.

    :raises PreconditionError: otherwise
    """
    half = Fraction(1, 2)
    if gamma == half and allow_half:
        if epsilon != half:
            raise PreconditionError(f'for gamma = 1/2 epsilon must be 1/2, got {epsilon}')
        return
    if not 0 < gamma < half:
        raise PreconditionError(f'gamma must lie in (0, 1/2), got {gamma}')
    exponent = power_of_two_exponent(epsilon)
    if exponent is None or exponent < 1:
        raise PreconditionError(f'epsilon must be 2**-i with i >= 1, got {epsilon}')
    if not epsilon < min((half - gamma) / 2, gamma):
        raise PreconditionError(f'epsilon must be below min((1/2)(1/2 - gamma), gamma) = '
                                f'{min((half - gamma) / 2, gamma)}, got {epsilon}')
