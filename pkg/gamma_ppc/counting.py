"""counting.py

Counting kernels for the pair correlation statistic

    R₂(γ; s, N) = (1/N)·#{1 ≤ m ≠ n ≤ N : ‖x_m − x_n − γ‖ ≤ s/N}

and the structural identities built on it. Pairs are ordered: (m, n) and (n, m) both count.
The ball is closed (``≤``). Float points go through :class:`FloatPairCounter`, exact rational
points through :class:`ExactPairCounter`; :func:`r2_count_naive` is the quadratic reference both
are tested against.
"""

import logging
from bisect import bisect_left, bisect_right
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
from math import floor, lcm
from typing import List, Optional, Sequence, Union

import numpy as np

from .density import density_overlap
from .errors import PreconditionError
from .torus import as_points, common_denominator, is_exact, nearest_integer_distance, scale_to_integers
from .typing import PointsLike, RealLike
from .utils import cached_property, pairwise, tail_half, to_fraction

LOGGER = logging.getLogger('gamma_ppc.counting')

#: float window slack; candidates this close to a window edge are decided by the naive predicate
BOUNDARY_SLACK = 1e-12

Number = Union[Fraction, float]

DoublingCheck = namedtuple('DoublingCheck', ['left', 'right_sum', 'residual'])
DoublingCheck.__doc__ = """Counts on both sides of the doubling identity and their difference"""

Thm4Decomposition = namedtuple('Thm4Decomposition', ['left', 'same_parity', 'minus', 'plus',
                                                     'diagonal', 'residual'])
Thm4Decomposition.__doc__ = """The doubled sequence's count at γ₁ and its four-term split over the base"""

TailSummary = namedtuple('TailSummary', ['results', 'tail_minimum'])
TailSummary.__doc__ = """R₂ along an N schedule and the minimum over the final half of the schedule"""


@dataclass(frozen=True)
class PairCountResult():
    """The ordered-pair count for one (γ, s, N) and its normalization ``r2 = count / n``

    :param n: sequence length
    :param gamma: the shift
    :param s: the scale
    :param count: number of ordered pairs m ≠ n within s/N of the shift
    :param expected: ``2s·d(γ)`` when a density model is attached
    :param seed: the seed of the generating sequence, for random kinds
    """
    n: int
    gamma: Number
    s: Number
    count: int
    expected: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if not 0 <= self.count <= self.n * (self.n - 1):
            raise PreconditionError(f'count {self.count} outside [0, n(n-1)] for n={self.n}')

    @property
    def r2(self) -> Fraction:
        """count / n, exactly"""
        return Fraction(self.count, self.n)

    @property
    def abs_err(self) -> Optional[float]:
        """|r2 − expected| when an expectation is attached"""
        if self.expected is None:
            return None
        return abs(float(self.r2) - self.expected)


def _check_size(n: int) -> None:
    if n < 2:
        raise PreconditionError(f'pair counts need at least 2 points, got {n}')


def _positive_scale(s: RealLike) -> Fraction:
    scale = to_fraction(s)
    if scale <= 0:
        raise PreconditionError(f's must be positive, got {s}')
    return scale


def _float_distance(diff: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """‖d‖ in Float64; the single formula shared by the naive and fast float kernels"""
    return np.abs(diff - np.rint(diff))


class FloatPairCounter():
    """O(N log N) counting over Float64 points; one sort serves every (γ, s) query

    For each point x the kernel counts sorted points inside the arc [x − γ − s/N, x − γ + s/N]
    with binary searches over the sorted array extended by copies shifted by −1 and +1, so the
    wraparound needs no modular branching. Candidates within :data:`BOUNDARY_SLACK` of either arc
    end are decided with the same predicate :func:`r2_count_naive` uses, which makes the two
    kernels agree exactly. Self-matches (present when ‖γ‖ ≤ s/N) are subtracted at the end.

    :param points: the points, reduced mod 1
    """

    def __init__(self, points: PointsLike) -> None:
        values = as_points(points)
        self.points = values if isinstance(values, np.ndarray) else np.asarray(
            [float(p) for p in values], dtype=np.float64)
        self.n = int(self.points.size)
        _check_size(self.n)

    @cached_property
    def sorted_points(self) -> np.ndarray:
        """The points in increasing order"""
        return np.sort(self.points)

    @cached_property
    def extended(self) -> np.ndarray:
        """sorted − 1, sorted, sorted + 1, concatenated"""
        ordered = self.sorted_points
        return np.concatenate((ordered - 1.0, ordered, ordered + 1.0))

    def count(self, gamma: RealLike, s: RealLike) -> int:
        """Number of ordered pairs m ≠ n with ‖x_m − x_n − γ‖ ≤ s/N"""
        shift = float(to_fraction(gamma)) if isinstance(gamma, str) else float(gamma)
        radius = float(_positive_scale(s)) if not isinstance(s, float) else s
        if radius <= 0:
            raise PreconditionError(f's must be positive, got {s}')
        radius /= self.n
        if radius >= 0.5:
            return self.n * (self.n - 1)
        if radius + 2 * BOUNDARY_SLACK >= 0.5:
            return _naive_float(self.points, shift, radius)
        ext = self.extended
        centers = np.mod(self.points - shift, 1.0)
        lo_out = np.searchsorted(ext, centers - radius - BOUNDARY_SLACK, side='left')
        lo_in = np.searchsorted(ext, centers - radius + BOUNDARY_SLACK, side='left')
        hi_in = np.maximum(np.searchsorted(ext, centers + radius - BOUNDARY_SLACK, side='right'), lo_in)
        hi_out = np.searchsorted(ext, centers + radius + BOUNDARY_SLACK, side='right')
        total = int((hi_in - lo_in).sum())
        edgy = np.flatnonzero((lo_in > lo_out) | (hi_out > hi_in))
        ordered = self.sorted_points
        for i in edgy:
            x = self.points[i]
            for j in list(range(lo_out[i], lo_in[i])) + list(range(hi_in[i], hi_out[i])):
                if _float_distance(x - ordered[j % self.n] - shift) <= radius:
                    total += 1
        if _float_distance(-shift) <= radius:
            total -= self.n
        LOGGER.debug('float count: n=%d gamma=%r s=%r -> %d (%d boundary queries)',
                     self.n, shift, s, total, edgy.size)
        return total

    def result(self, gamma: RealLike, s: RealLike, expected: Optional[float] = None,
               seed: Optional[int] = None) -> PairCountResult:
        """:meth:`count` wrapped in a :class:`PairCountResult`"""
        return PairCountResult(self.n, gamma, s, self.count(gamma, s), expected, seed)


class ExactPairCounter():
    """O(N log N) counting over exact rational points

    Points and shift are scaled by the least common denominator D to residues mod D; the
    condition ‖a − b − γ‖ ≤ s/N becomes an integer distance bound ⌊D·s/N⌋, evaluated by bisection
    over the sorted residues extended by ±D.

    :param points: exact rational points
    """

    def __init__(self, points: Sequence[Fraction]) -> None:
        self.points = tuple(Fraction(p) % 1 for p in points)
        self.n = len(self.points)
        _check_size(self.n)
        self._denominator = common_denominator(self.points)
        self._scaled = {}

    def _residues(self, denominator: int) -> List[int]:
        if denominator not in self._scaled:
            ordered = sorted(scale_to_integers(self.points, denominator))
            self._scaled[denominator] = ([p - denominator for p in ordered] + ordered +
                                         [p + denominator for p in ordered])
        return self._scaled[denominator]

    def count(self, gamma: RealLike, s: RealLike) -> int:
        """Number of ordered pairs m ≠ n with ‖x_m − x_n − γ‖ ≤ s/N, exactly"""
        shift = to_fraction(gamma) % 1
        radius = _positive_scale(s) / self.n
        if radius >= Fraction(1, 2):
            return self.n * (self.n - 1)
        denominator = lcm(self._denominator, shift.denominator)
        ext = self._residues(denominator)
        bound = floor(radius * denominator)
        offset = (shift * denominator).numerator
        total = 0
        for point in ext[self.n:2 * self.n]:
            center = (point - offset) % denominator
            total += bisect_right(ext, center + bound) - bisect_left(ext, center - bound)
        if nearest_integer_distance(shift) <= radius:
            total -= self.n
        LOGGER.debug('exact count: n=%d gamma=%s s=%s D=%d -> %d', self.n, shift, s, denominator, total)
        return total

    def result(self, gamma: RealLike, s: RealLike, expected: Optional[float] = None,
               seed: Optional[int] = None) -> PairCountResult:
        """:meth:`count` wrapped in a :class:`PairCountResult`"""
        return PairCountResult(self.n, gamma, s, self.count(gamma, s), expected, seed)


def pair_counter(points: PointsLike) -> Union[FloatPairCounter, ExactPairCounter]:
    """The exact kernel for exact points, the float kernel otherwise"""
    values = as_points(points)
    if is_exact(values):
        return ExactPairCounter(values)
    return FloatPairCounter(values)


def _naive_float(points: np.ndarray, shift: float, radius: float) -> int:
    total = 0
    for i in range(points.size):
        within = _float_distance(points[i] - points - shift) <= radius
        total += int(np.count_nonzero(within)) - int(within[i])
    return total


def r2_count_naive(points: PointsLike, gamma: RealLike, s: RealLike) -> PairCountResult:
    """The defining count by a double loop over all ordered pairs

    Exact rational comparison when the points are exact, Float64 otherwise.

    :raises PreconditionError: fewer than 2 points or s ≤ 0
    """
    values = as_points(points)
    n = len(values)
    _check_size(n)
    scale = _positive_scale(s)
    if is_exact(values):
        shift, radius = to_fraction(gamma), scale / n
        total = sum(1 for m, x in enumerate(values) for k, y in enumerate(values)
                    if m != k and nearest_integer_distance(x - y - shift) <= radius)
    else:
        shift = float(to_fraction(gamma)) if isinstance(gamma, str) else float(gamma)
        radius = (s if isinstance(s, float) else float(scale)) / n
        total = _naive_float(values, shift, radius)
    return PairCountResult(n, gamma, s, total)


def r2_count_fast(points: PointsLike, gamma: RealLike, s: RealLike) -> PairCountResult:
    """The O(N log N) float kernel; identical counts to :func:`r2_count_naive`

    :raises PreconditionError: fewer than 2 points or s ≤ 0
    """
    values = as_points(points)
    if is_exact(values):
        values = np.asarray([float(p) for p in values], dtype=np.float64)
    return FloatPairCounter(values).result(gamma, s)


def r2_count_exact(points: Sequence[Fraction], gamma: RealLike, s: RealLike) -> PairCountResult:
    """The O(N log N) exact-rational kernel

    :raises PreconditionError: fewer than 2 points, s ≤ 0, or inexact points
    """
    values = as_points(points)
    if not is_exact(values):
        raise PreconditionError('the exact kernel needs exact rational points')
    return ExactPairCounter(values).result(gamma, s)


def r2_count(points: PointsLike, gamma: RealLike, s: RealLike) -> PairCountResult:
    """Count with the fast kernel that matches the points' representation"""
    return pair_counter(points).result(gamma, s)


def r2_profile(points: PointsLike, gamma: RealLike, s_list: Sequence[RealLike],
               expected_overlap: Optional[float] = None) -> List[PairCountResult]:
    """One result per scale, sharing one sort across all of them

    :param expected_overlap: d(γ); when given each row carries ``expected = 2s·d(γ)``
    :raises PreconditionError: empty, non-positive or unsorted `s_list`
    """
    if not s_list:
        raise PreconditionError('s_list must not be empty')
    scales = [_positive_scale(s) for s in s_list]
    if any(b < a for a, b in pairwise(scales)):
        raise PreconditionError('s_list must be sorted')
    counter = pair_counter(points)
    return [counter.result(gamma, s, expected_limit(s, expected_overlap)) for s in s_list]


def expected_limit(s: RealLike, overlap: Optional[Number]) -> Optional[float]:
    """The almost-sure limit 2s·d(γ) of R₂ for i.i.d. samples, given the overlap d(γ)"""
    if overlap is None:
        return None
    return float(2 * to_fraction(s) * to_fraction(overlap))


def f_gamma_tail(spec, gamma: RealLike, s: RealLike, n_schedule: Sequence[int]) -> TailSummary:
    """R₂(γ; s, N) along a schedule of prefix lengths of one generated sequence

    The liminf defining F_γ cannot be computed; the minimum of R₂ over the final half of the
    schedule is reported as a finite-N proxy.

    :param spec: a :class:`~gamma_ppc.sequences.SequenceSpec`
    :raises PreconditionError: empty or non-increasing schedule
    """
    if not n_schedule:
        raise PreconditionError('the N schedule must not be empty')
    if any(b <= a for a, b in pairwise(n_schedule)):
        raise PreconditionError('the N schedule must be strictly increasing')
    sequence = spec.materialize(n_schedule[-1])
    density = spec.density_model()
    overlap = None if density is None else density_overlap(density, gamma)
    results = [pair_counter(sequence.prefix(n)).result(gamma, s, expected_limit(s, overlap), spec.seed)
               for n in n_schedule]
    return TailSummary(results, min(r.r2 for r in tail_half(results)))


def _doubled(points):
    if isinstance(points, np.ndarray):
        doubled = np.mod(2.0 * points, 1.0)
        doubled[doubled == 1.0] = 0.0
        return doubled
    return tuple(2 * p % 1 for p in points)


def doubling_check(points: PointsLike, s: RealLike) -> DoublingCheck:
    """Check that the count of (2x_n mod 1) at shift 0 and scale 2s equals the count of (x_n) at
    shift 0 plus the count at shift 1/2, both at scale s

    :raises PreconditionError: s/N ≥ 1/4, where the two arcs may overlap
    """
    values = as_points(points)
    n = len(values)
    _check_size(n)
    scale = _positive_scale(s)
    if not scale / n < Fraction(1, 4):
        raise PreconditionError(f'the doubling identity needs s/N < 1/4, got s={s}, N={n}')
    double_scale = 2 * scale if is_exact(values) else 2.0 * float(scale)
    left = pair_counter(_doubled(values)).count(0, double_scale)
    counter = pair_counter(values)
    half = Fraction(1, 2) if is_exact(values) else 0.5
    scale_arg = scale if is_exact(values) else float(scale)
    right = counter.count(0, scale_arg) + counter.count(half, scale_arg)
    return DoublingCheck(left, right, left - right)


def thm4_decomposition(base: PointsLike, gamma1: RealLike, gamma2: RealLike, s: RealLike) -> Thm4Decomposition:
    """Split the doubled sequence's count at γ₁ into counts of its base, exactly

    For ``y_{2n−1} = x_n``, ``y_{2n} = {x_n + γ₂}`` of length 2N, the count at γ₁ with radius
    s/(2N) equals twice the base count at γ₁, plus the base counts at γ₁ − γ₂ and γ₁ + γ₂, all at
    scale s/2 over N points, plus N for each of ‖γ₁ ∓ γ₂‖ that is within the radius (the n = m
    cross pairs). Float bases are converted to their exact binary values first.

    :raises PreconditionError: fewer than 2 base points or s ≤ 0
    """
    values = as_points(base)
    exact = tuple(Fraction(p) for p in (values if is_exact(values) else values.tolist()))
    n = len(exact)
    _check_size(n)
    first, second = to_fraction(gamma1), to_fraction(gamma2)
    scale = _positive_scale(s)
    doubled = tuple(p for x in exact for p in (x, (x + second) % 1))
    left = ExactPairCounter(doubled).count(first, scale)
    counter = ExactPairCounter(exact)
    same_parity = 2 * counter.count(first, scale / 2)
    minus = counter.count(first - second, scale / 2)
    plus = counter.count(first + second, scale / 2)
    radius = scale / (2 * n)
    diagonal = n * sum(1 for t in (first - second, first + second) if nearest_integer_distance(t) <= radius)
    return Thm4Decomposition(left, same_parity, minus, plus, diagonal,
                             left - same_parity - minus - plus - diagonal)


def min_shifted_distance(points: Sequence[Fraction], gamma: RealLike) -> Fraction:
    """min over a, b (a = b included) of ‖a − b − γ‖ for exact points, by sorted search

    :raises PreconditionError: empty or inexact points
    """
    values = as_points(points)
    if len(values) == 0 or not is_exact(values):
        raise PreconditionError('min_shifted_distance needs a nonempty set of exact points')
    shift = to_fraction(gamma) % 1
    denominator = common_denominator(values + (shift,))
    residues = sorted(set(scale_to_integers(values, denominator)))
    offset = (shift * denominator).numerator
    best = denominator
    size = len(residues)
    for point in residues:
        target = (point - offset) % denominator
        index = bisect_left(residues, target)
        for neighbour in (residues[index % size], residues[(index - 1) % size]):
            gap = abs(neighbour - target) % denominator
            best = min(best, gap, denominator - gap)
    return Fraction(best, denominator)
