"""distribution.py

Empirical distribution of a finite point set against a reference density: the empirical CDF on a
grid, equal-width histogram estimates, Kolmogorov–Smirnov tests via :mod:`scipy.stats`, and the
finite-scale look at the lower bound ‖g‖₂² that an asymptotic density g places on F_0(s)/(2s) for
large s.
"""

import logging
from bisect import bisect_right
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

from .counting import pair_counter
from .density import PiecewiseConstantDensity, uniform_density
from .errors import PreconditionError
from .torus import as_points, is_exact
from .typing import PointsLike, RealLike
from .utils import pairwise, to_fraction

LOGGER = logging.getLogger('gamma_ppc.distribution')

KSResult = namedtuple('KSResult', ['statistic', 'pvalue', 'n'])
KSResult.__doc__ = """Two-sided Kolmogorov–Smirnov statistic, its p-value and the sample size"""

AlpDiagnostic = namedtuple('AlpDiagnostic', ['r2', 'r2_over_2s', 'l2_norm_squared', 'ratio'])
AlpDiagnostic.__doc__ = """R₂(0; s, N)/(2s) next to ‖g‖₂² of a histogram estimate g, and their ratio"""


@dataclass(frozen=True)
class EmpiricalDistribution():
    """Counts of points ``≤ t`` for each grid point ``t``

    :param grid: increasing grid points in (0, 1], ending at 1
    :param counts: number of points ``≤ t`` for each grid point
    :param n: number of points
    """
    grid: Tuple[float, ...]
    counts: Tuple[int, ...]
    n: int

    @property
    def values(self) -> Tuple[Fraction, ...]:
        """The empirical CDF values ``counts / n``"""
        return tuple(Fraction(count, self.n) for count in self.counts)


def _check_grid(grid: Sequence[RealLike]) -> Tuple[Fraction, ...]:
    if not grid:
        raise PreconditionError('the grid must not be empty')
    parsed = tuple(to_fraction(t) for t in grid)
    if any(b <= a for a, b in pairwise(parsed)):
        raise PreconditionError('the grid must be strictly increasing')
    if parsed[0] < 0 or parsed[-1] != 1:
        raise PreconditionError('the grid must lie in [0, 1] and end at 1')
    return parsed


def empirical_cdf(points: PointsLike, grid: Sequence[RealLike]) -> EmpiricalDistribution:
    """Count points at or below each grid point

    Exact points are compared exactly, float points against the float grid.

    :raises PreconditionError: no points, or a grid that is not increasing, ending at 1
    """
    values = as_points(points)
    if len(values) == 0:
        raise PreconditionError('empirical_cdf needs at least one point')
    parsed = _check_grid(grid)
    if is_exact(values):
        ordered = sorted(values)
        counts = tuple(bisect_right(ordered, t) for t in parsed)
    else:
        ordered = np.sort(values)
        counts = tuple(int(c) for c in np.searchsorted(ordered, [float(t) for t in parsed], side='right'))
    return EmpiricalDistribution(tuple(float(t) for t in parsed), counts, len(values))


def histogram_density(points: PointsLike, bin_count: int) -> PiecewiseConstantDensity:
    """Equal-width histogram of the points as an exact piecewise-constant density

    :raises PreconditionError: no points or ``bin_count < 1``
    """
    values = as_points(points)
    n = len(values)
    if n == 0 or bin_count < 1:
        raise PreconditionError('histogram_density needs points and at least one bin')
    if is_exact(values):
        bins = np.asarray([int(p * bin_count) for p in values], dtype=np.int64)
    else:
        bins = np.minimum(np.floor(values * bin_count).astype(np.int64), bin_count - 1)
    counts = np.bincount(bins, minlength=bin_count)
    return PiecewiseConstantDensity([Fraction(i, bin_count) for i in range(bin_count + 1)],
                                    [Fraction(int(count) * bin_count, n) for count in counts])


def ks_density(points: PointsLike, density: PiecewiseConstantDensity) -> KSResult:
    """Kolmogorov–Smirnov test of the points against the CDF of `density`"""
    values = as_points(points)
    sample = np.asarray([float(p) for p in values], dtype=np.float64) if is_exact(values) else values
    if sample.size == 0:
        raise PreconditionError('a KS test needs at least one point')
    result = stats.kstest(sample, density.cdf)
    LOGGER.debug('KS: n=%d D=%.6g p=%.6g', sample.size, result.statistic, result.pvalue)
    return KSResult(float(result.statistic), float(result.pvalue), int(sample.size))


def ks_uniform(points: PointsLike) -> KSResult:
    """Kolmogorov–Smirnov test of the points against the uniform distribution"""
    return ks_density(points, uniform_density())


def ks_critical_value(n: int, alpha: float = 0.01) -> float:
    """The two-sided KS statistic exceeded with probability `alpha` under the null, for `n` points"""
    if n < 1 or not 0 < alpha < 1:
        raise PreconditionError(f'need n >= 1 and 0 < alpha < 1, got n={n}, alpha={alpha}')
    return float(stats.kstwo.ppf(1 - alpha, n))


def alp_diagnostic(points: PointsLike, s: RealLike, bin_count: int) -> AlpDiagnostic:
    """Compare R₂(0; s, N)/(2s) with ‖g‖₂² for a histogram estimate g of the points

    For a sequence with asymptotic density g the lim sup over s of F_0(s)/(2s) is at least
    ‖g‖₂². At finite N and s this is only a diagnostic, so the ratio is reported without a verdict.
    """
    density = histogram_density(points, bin_count)
    norm = density.l2_norm_squared()
    count = pair_counter(points).count(0, s)
    n = len(as_points(points))
    r2 = Fraction(count, n)
    scaled = r2 / (2 * to_fraction(s))
    return AlpDiagnostic(r2, scaled, norm, float(scaled / to_fraction(norm)))
