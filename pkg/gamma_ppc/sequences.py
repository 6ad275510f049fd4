"""sequences.py

Deterministic constructions of every sequence the package studies, seeded sampling from
piecewise-constant densities, and :class:`SequenceSpec`, the declarative description of a
generator that experiment configs carry around.

Every generator is pure given ``(spec, index range)``: :func:`thm3_term` gives random access into
the interleaved construction, and the seeded streams can be advanced to any start index, so
disjoint ranges materialized independently concatenate to the same sequence.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, Optional, Tuple

import numpy as np

from .density import (PiecewiseConstantDensity, check_theorem3_parameters, theorem1_density,
                      theorem3_density, uniform_density)
from .errors import ConfigValidationError, PreconditionError
from .torus import as_points, is_exact, reduce_mod1
from .typing import PointArray, PointsLike, RealLike
from .utils import format_real, to_fraction
from .validation import SEQUENCE_PARAM_SCHEMAS, SEQUENCE_SPEC_SCHEMA, validate_document

LOGGER = logging.getLogger('gamma_ppc.sequences')

#: the seeded uniform stream behind every random kind; recorded in report metadata
GENERATOR_ALGORITHM = 'numpy.random.Generator(PCG64).random, one uint64 per draw'

#: kinds whose output depends on the seed
RANDOM_KINDS = frozenset(('iid_uniform', 'iid_density'))
#: kinds that produce exact rational points
EXACT_KINDS = frozenset(('vdc', 'thm3_interleaved'))

HALF = Fraction(1, 2)


def uniform_stream(seed: int, count: int, start: int = 0) -> np.ndarray:
    """`count` uniforms in [0, 1) from the seeded PCG64 stream, starting at draw `start`

    :param seed: unsigned 64-bit seed
    :param count: number of draws
    :param start: number of draws to skip, so that ranges can be produced independently
    """
    if seed is None:
        raise PreconditionError('random sequences need a seed')
    bit_generator = np.random.PCG64(seed)
    if start:
        bit_generator.advance(start)
    return np.random.Generator(bit_generator).random(count)


def van_der_corput(n: int) -> Fraction:
    """The n-th term of the binary van der Corput sequence

    Writing ``n − 1 = Σ a_j 2^j``, returns ``c_n = Σ a_j / 2^(j+1)``: the binary digits of n − 1
    mirrored across the radix point.

    :raises PreconditionError: n < 1
    """
    if n < 1:
        raise PreconditionError(f'van der Corput index must be >= 1, got {n}')
    index = n - 1
    if not index:
        return Fraction(0)
    width = index.bit_length()
    return Fraction(int(format(index, 'b')[::-1], 2), 1 << width)


def block_index(n: int) -> int:
    """N(n) = ⌈log₂ n⌉, i.e. the N with 2^(N−1) < n ≤ 2^N, and N(1) = 0"""
    if n < 1:
        raise PreconditionError(f'index must be >= 1, got {n}')
    return (n - 1).bit_length()


def _theorem3_parameters(gamma: RealLike, epsilon: Optional[RealLike]) -> Tuple[Fraction, Fraction]:
    gamma = to_fraction(gamma)
    epsilon = HALF if epsilon is None and gamma == HALF else epsilon
    if epsilon is None:
        raise PreconditionError('epsilon is required when gamma != 1/2')
    epsilon = to_fraction(epsilon)
    check_theorem3_parameters(gamma, epsilon)
    return gamma, epsilon


def thm3_yz(n: int, gamma: RealLike, epsilon: Optional[RealLike] = None) -> Tuple[Fraction, Fraction]:
    """The auxiliary points ``y_n = ε·c_n`` and ``z_n = γ + y_n + 1/(3·2^N(n))``

    :param n: index, at least 1
    :param gamma: 1/2, or a shift in (0, 1/2)
    :param epsilon: 1/2 when gamma is 1/2 (the default then), else ``2**-i`` below
                    min{(1/2)(1/2 − γ), γ}
    :raises PreconditionError: invalid (γ, ε) or n < 1
    """
    gamma, epsilon = _theorem3_parameters(gamma, epsilon)
    return _yz(n, gamma, epsilon)


def _yz(n: int, gamma: Fraction, epsilon: Fraction) -> Tuple[Fraction, Fraction]:
    y = epsilon * van_der_corput(n)
    return y, gamma + y + Fraction(1, 3 << block_index(n))


def _stage_of(n: int) -> int:
    """The N ≥ 1 with 2N·2^N < n ≤ 2(N+1)·2^(N+1), for n > 4"""
    stage = 1
    while 2 * (stage + 1) << (stage + 1) < n:
        stage += 1
    return stage


def _locate(n: int) -> Tuple[int, int]:
    """Map a term index to ``(pair index, 0 for y / 1 for z)``"""
    if n < 1:
        raise PreconditionError(f'index must be >= 1, got {n}')
    if n <= 4:
        return (n + 1) // 2, (n - 1) % 2
    stage = _stage_of(n)
    offset = n - (2 * stage << stage) - 1
    width = 2 << stage
    if offset < width:
        return offset // 2 + 1, offset % 2
    return (1 << stage) + ((offset - width) % width) // 2 + 1, offset % 2


def thm3_term(n: int, gamma: RealLike, epsilon: Optional[RealLike] = None) -> Fraction:
    """Random access to the n-th term of the interleaved construction

    The first four terms are ``(y₁, z₁, y₂, z₂)``. Once terms up to ``2N·2^N`` exist, the next
    ``2^(N+1)`` are ``(y₁, z₁, …, y_{2^N}, z_{2^N})`` and the ``(N+1)·2^(N+1)`` after them repeat
    the tuple ``(y_{2^N+1}, z_{2^N+1}, …, y_{2^(N+1)}, z_{2^(N+1)})`` N + 1 times.

    :raises PreconditionError: n < 1 or invalid (γ, ε)
    """
    gamma, epsilon = _theorem3_parameters(gamma, epsilon)
    pair, which = _locate(n)
    return _yz(pair, gamma, epsilon)[which]


def thm3_interleaved(length: int, gamma: RealLike, epsilon: Optional[RealLike] = None,
                     start: int = 0) -> 'GeneratedSequence':
    """Terms ``start + 1 … start + length`` of the interleaved construction, exact

    :raises PreconditionError: invalid (γ, ε)
    """
    gamma, epsilon = _theorem3_parameters(gamma, epsilon)
    pairs: Dict[int, Tuple[Fraction, Fraction]] = {}
    points = []
    for n in range(start + 1, start + length + 1):
        pair, which = _locate(n)
        if pair not in pairs:
            pairs[pair] = _yz(pair, gamma, epsilon)
        points.append(pairs[pair][which])
    spec = SequenceSpec('thm3_interleaved', {'gamma': gamma, 'epsilon': epsilon})
    LOGGER.debug('thm3_interleaved: %d exact terms from index %d (%d distinct pairs)',
                 length, start + 1, len(pairs))
    return GeneratedSequence(tuple(points), spec)


def thm3_grid_sets(n: int, gamma: RealLike = HALF,
                   epsilon: RealLike = HALF) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """The finite sets Y_N and Z_N that contain every term up to index 2(N+1)·2^(N+1)

    ``Y_N = {j/2^(N+2) : 0 ≤ j < 2^(N+1)}`` and
    ``Z_N = {1/2 + j/2^(N+2) + 1/(3·2^k) : 0 ≤ j < 2^(N+1), 0 ≤ k ≤ N+1} ∩ [1/2, 1]``.
    Only defined for γ = ε = 1/2.

    :return: both sets, sorted
    :raises PreconditionError: n < 0 or another (γ, ε)
    """
    if to_fraction(gamma) != HALF or to_fraction(epsilon) != HALF:
        raise PreconditionError('Y_N and Z_N are only defined for gamma = epsilon = 1/2')
    if n < 0:
        raise PreconditionError(f'N must be nonnegative, got {n}')
    step = Fraction(1, 1 << (n + 2))
    grid = [j * step for j in range(1 << (n + 1))]
    z_points = {HALF + y + Fraction(1, 3 << k) for y in grid for k in range(n + 2)}
    return tuple(grid), tuple(sorted(z for z in z_points if z <= 1))


def thm4_doubled(base: 'GeneratedSequence', gamma2: RealLike) -> 'GeneratedSequence':
    """Interleave a sequence with its own shift: ``y_{2n−1} = x_n``, ``y_{2n} = {x_n + γ₂}``

    Exact when the base is exact, float otherwise.

    :raises PreconditionError: empty base
    """
    if base.length == 0:
        raise PreconditionError('the base sequence must be nonempty')
    shift = to_fraction(gamma2)
    if base.exact:
        doubled: PointArray = tuple(p for x in base.points for p in (x, reduce_mod1(x + shift)))
    else:
        source = np.asarray(base.points, dtype=np.float64)
        shifted = np.mod(source + float(shift), 1.0)
        shifted[shifted == 1.0] = 0.0
        doubled = np.empty(2 * source.size, dtype=np.float64)
        doubled[0::2], doubled[1::2] = source, shifted
    spec = None
    if base.spec is not None:
        spec = SequenceSpec('thm4_doubled', {'base': base.spec, 'gamma2': shift}, base.spec.seed)
    return GeneratedSequence(doubled, spec)


def sample_density(density: PiecewiseConstantDensity, count: int, seed: int,
                   start: int = 0) -> 'GeneratedSequence':
    """i.i.d. draws from `density` by the inverse-CDF transform of the seeded uniform stream

    The uniform ``u`` is mapped to the interval whose cumulative mass range contains it, then
    placed linearly inside it; zero-mass intervals are never selected. Identical seed and density
    give bit-identical output.

    :raises PreconditionError: count < 0 or missing seed
    """
    if count < 0:
        raise PreconditionError(f'count must be nonnegative, got {count}')
    uniforms = uniform_stream(seed, count, start)
    edges = np.asarray(density.breakpoints, dtype=np.float64)
    values = np.asarray(density.values, dtype=np.float64)
    cumulative = density.cumulative_masses()
    index = np.clip(np.searchsorted(cumulative[1:], uniforms, side='right'), 0, len(values) - 1)
    points = edges[index] + (uniforms - cumulative[index]) / values[index]
    points = np.clip(points, edges[index], np.nextafter(edges[index + 1], 0.0))
    points.setflags(write=False)
    model = dict(density.to_json(), kind='piecewise')
    return GeneratedSequence(points, SequenceSpec('iid_density', {'density': model}, seed))


def dilated_sequence(multiplier: int, x: RealLike, count: int, start: int = 0) -> 'GeneratedSequence':
    """``{multiplier·n·x}`` for n = start+1 … start+count, reduced exactly and returned as floats

    `x` is read with :func:`~gamma_ppc.utils.to_fraction`, so a float goes through its shortest
    decimal form exactly as it does in a spec document.

    :raises PreconditionError: count < 0 or multiplier < 1
    """
    if count < 0:
        raise PreconditionError(f'count must be nonnegative, got {count}')
    if multiplier < 1:
        raise PreconditionError(f'multiplier must be a positive integer, got {multiplier}')
    base = to_fraction(x)
    points = np.array([float(multiplier * n * base % 1) for n in range(start + 1, start + count + 1)],
                      dtype=np.float64)
    points.setflags(write=False)
    return GeneratedSequence(points, SequenceSpec('dilated', {'multiplier': multiplier, 'x': base}))


@dataclass(frozen=True, eq=False)
class GeneratedSequence():
    """An ordered list of torus points together with the spec that produced it

    :param points: a tuple of Fractions (exact kinds) or a read-only float64 array
    :param spec: the producing spec, when known
    """
    points: PointArray
    spec: Optional['SequenceSpec'] = None

    @property
    def length(self) -> int:
        """Number of points"""
        return len(self.points)

    @property
    def exact(self) -> bool:
        """True when the points are exact rationals"""
        return is_exact(self.points)

    def prefix(self, length: int) -> PointArray:
        """The first `length` points"""
        if length > self.length:
            raise PreconditionError(f'requested a prefix of {length} from {self.length} points')
        return self.points[:length]

    def as_floats(self) -> np.ndarray:
        """The points as a float64 array"""
        return np.asarray([float(p) for p in self.points], dtype=np.float64) if self.exact \
            else np.asarray(self.points, dtype=np.float64)

    def csv_lines(self) -> Iterable[str]:
        """One point per line: ``p/q`` for exact points, `repr` of the float otherwise"""
        for point in self.points:
            yield format_real(point if isinstance(point, Fraction) else float(point))

    def __len__(self) -> int:
        return self.length


def export_sequence_csv(sequence: GeneratedSequence, path: str) -> None:
    """Write a generated sequence to `path`, one point per line

    :raises OSError: the file cannot be written
    """
    with open(path, 'w', encoding='utf-8', newline='\n') as out:
        for line in sequence.csv_lines():
            out.write(line + '\n')
    LOGGER.info('wrote %d points to %s', sequence.length, path)


def density_from_model(model: Dict[str, Any]) -> PiecewiseConstantDensity:
    """Build the density named by a ``{"kind": ...}`` model from a sequence spec"""
    kind = model['kind']
    if kind == 'theorem1':
        return theorem1_density(model['gamma'], model['delta'])
    if kind == 'theorem3':
        return theorem3_density(model['gamma'], model['epsilon'])
    if kind == 'uniform':
        return uniform_density()
    return PiecewiseConstantDensity(model['breakpoints'], model['values'])


@dataclass(frozen=True)
class SequenceSpec():
    """Declarative description of a generator: construction name, parameters and seed

    Random kinds (``iid_uniform``, ``iid_density`` and ``thm4_doubled`` over a random base) must
    carry a seed; deterministic kinds ignore it.
    """
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None

    @property
    def is_random(self) -> bool:
        """True when the output depends on the seed"""
        if self.kind == 'thm4_doubled':
            return self.params['base'].is_random
        return self.kind in RANDOM_KINDS

    @property
    def exact(self) -> bool:
        """True when the generated points are exact rationals"""
        if self.kind == 'thm4_doubled':
            return self.params['base'].exact
        return self.kind in EXACT_KINDS

    def with_seed(self, seed: Optional[int]) -> 'SequenceSpec':
        """A copy with a new seed, propagated into a nested base spec"""
        params = dict(self.params)
        if self.kind == 'thm4_doubled':
            params['base'] = params['base'].with_seed(seed)
        return SequenceSpec(self.kind, params, seed)

    def density_model(self) -> Optional[PiecewiseConstantDensity]:
        """The density of the i.i.d. draws, for the i.i.d. kinds; `None` for constructions"""
        if self.kind == 'iid_uniform':
            return uniform_density()
        if self.kind == 'iid_density':
            return density_from_model(self.params['density'])
        return None

    def materialize(self, length: int, start: int = 0) -> GeneratedSequence:
        """Generate terms ``start + 1 … start + length``

        :raises PreconditionError: negative length, missing seed for a random kind, or parameters
                                   violating the construction's preconditions
        """
        if length < 0:
            raise PreconditionError(f'length must be nonnegative, got {length}')
        if self.is_random and self.seed is None:
            raise PreconditionError(f'{self.kind} sequences need a seed')
        points = _GENERATORS[self.kind](self, length, start)
        LOGGER.debug('materialized %s: %d points from index %d', self.kind, length, start + 1)
        return GeneratedSequence(points, self)

    def to_json(self) -> Dict[str, Any]:
        """JSON-ready dict; exact parameters are rendered as ``p/q`` strings"""
        params = {}
        for key, value in self.params.items():
            if isinstance(value, SequenceSpec):
                params[key] = value.to_json()
            elif isinstance(value, dict):
                params[key] = {k: format_real(v) if isinstance(v, Fraction) else v for k, v in value.items()}
            else:
                params[key] = format_real(value) if isinstance(value, Fraction) else value
        document = {'kind': self.kind, 'params': params}
        if self.seed is not None:
            document['seed'] = self.seed
        return document

    @classmethod
    def from_json(cls, document: Dict[str, Any], prefix: str = '') -> 'SequenceSpec':
        """Validate and parse a spec document

        :param document: ``{"kind": ..., "params": {...}, "seed": ...}``
        :param prefix: the document's path inside a larger document, used in error paths
        :raises ConfigValidationError: schema failures or precondition failures, with the field path
        """
        validate_document(SEQUENCE_SPEC_SCHEMA, document, prefix)
        kind = document['kind']
        raw = document.get('params', {})
        params_path = f'{prefix}.params' if prefix else 'params'
        validate_document(SEQUENCE_PARAM_SCHEMAS[kind], raw, params_path)
        params: Dict[str, Any] = {}
        for key, value in raw.items():
            if key == 'base':
                params[key] = cls.from_json(value, f'{params_path}.base')
            elif key == 'density':
                params[key] = dict(value)
            elif key == 'multiplier':
                params[key] = value
            else:
                params[key] = to_fraction(value)
        spec = cls(kind, params, document.get('seed'))
        if kind == 'thm4_doubled' and spec.seed is not None and params['base'].seed is None:
            spec = spec.with_seed(spec.seed)
        if spec.is_random and spec.seed is None and not prefix:
            raise ConfigValidationError(f'{kind} sequences need a seed', 'seed')
        try:
            spec.check()
        except PreconditionError as err:
            raise ConfigValidationError(str(err), params_path) from err
        return spec

    def check(self) -> None:
        """Check the construction preconditions without generating anything

        :raises PreconditionError: on violation
        """
        if self.kind == 'thm3_interleaved':
            _theorem3_parameters(self.params['gamma'], self.params.get('epsilon'))
        elif self.kind == 'iid_density':
            density_from_model(self.params['density'])
        elif self.kind == 'thm4_doubled':
            self.params['base'].check()


def _generate_vdc(_spec: SequenceSpec, length: int, start: int) -> PointArray:
    return tuple(van_der_corput(n) for n in range(start + 1, start + length + 1))


def _generate_iid_uniform(spec: SequenceSpec, length: int, start: int) -> PointArray:
    return sample_density(uniform_density(), length, spec.seed, start).points


def _generate_iid_density(spec: SequenceSpec, length: int, start: int) -> PointArray:
    return sample_density(spec.density_model(), length, spec.seed, start).points


def _generate_thm3(spec: SequenceSpec, length: int, start: int) -> PointArray:
    return thm3_interleaved(length, spec.params['gamma'], spec.params.get('epsilon'), start).points


def _generate_thm4(spec: SequenceSpec, length: int, start: int) -> PointArray:
    if start % 2:
        raise PreconditionError('doubled sequences can only be split at even indices')
    base_length = (length + 1) // 2
    base = spec.params['base'].materialize(base_length, start // 2)
    if base_length == 0:
        return () if base.exact else np.empty(0, dtype=np.float64)
    return thm4_doubled(base, spec.params['gamma2']).points[:length]


def _generate_dilated(spec: SequenceSpec, length: int, start: int) -> PointArray:
    return dilated_sequence(spec.params['multiplier'], spec.params['x'], length, start).points


_GENERATORS: Dict[str, Callable[[SequenceSpec, int, int], PointArray]] = {
    'vdc': _generate_vdc,
    'iid_uniform': _generate_iid_uniform,
    'iid_density': _generate_iid_density,
    'thm3_interleaved': _generate_thm3,
    'thm4_doubled': _generate_thm4,
    'dilated': _generate_dilated,
}


def generated(points: PointsLike, spec: Optional[SequenceSpec] = None) -> GeneratedSequence:
    """Wrap arbitrary points as a GeneratedSequence (exact stays exact, anything else float64)"""
    return GeneratedSequence(as_points(points), spec)

