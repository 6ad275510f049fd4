"""experiments.py

Experiment configs and the three commands behind the CLI: :func:`cmd_r2` evaluates R₂ over a grid
of seeds, shifts, scales and prefix lengths; :func:`cmd_theorem` runs the canned configuration of a
named construction and grades it; :func:`cmd_verify` runs the exact invariant suite.
"""

import json
import logging
import time
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .__about__ import __release__
from .counting import (ExactPairCounter, FloatPairCounter, PairCountResult, doubling_check,
                       expected_limit, min_shifted_distance, pair_counter, r2_count_exact,
                       r2_count_fast, r2_count_naive, thm4_decomposition)
from .density import density_overlap, theorem1_density, theorem3_density
from .errors import ConfigValidationError, PreconditionError
from .sequences import (GENERATOR_ALGORITHM, SequenceSpec, generated, sample_density,
                        thm3_grid_sets, thm3_interleaved, thm4_doubled)
from .serialization import write_report
from .utils import merge, pairwise, to_fraction
from .validation import EXPERIMENT_CONFIG_SCHEMA, validate_document

LOGGER = logging.getLogger('gamma_ppc.experiments')

Criterion = namedtuple('Criterion', ['name', 'passed', 'detail', 'statistical'])
Criterion.__doc__ = """One graded claim of a preset; `passed` is `None` for values reported without a verdict"""

VerifyOutcome = namedtuple('VerifyOutcome', ['status', 'failures', 'checked'])
VerifyOutcome.__doc__ = """Exit status, the failure list and the names of every invariant that ran"""

#: a pair-count kernel with the signature of :func:`~gamma_ppc.counting.r2_count_fast`
Kernel = Callable[[Any, Any, Any], PairCountResult]


@dataclass(frozen=True)
class ExperimentConfig():
    """A validated experiment configuration

    :param spec: the sequence to evaluate
    :param gammas: shifts in [0, 1)
    :param s_values: positive scales
    :param n_schedule: strictly increasing prefix lengths
    :param seeds: one run per seed; ``(None,)`` for deterministic kinds without seeds
    :param output: report path, or `None` to skip writing
    :param format: ``csv`` or ``json``
    :param workers: thread pool size for the per-seed runs
    :param document: the validated source document, echoed in report metadata
    """
    spec: SequenceSpec
    gammas: Tuple[Fraction, ...]
    s_values: Tuple[Fraction, ...]
    n_schedule: Tuple[int, ...]
    seeds: Tuple[Optional[int], ...] = (None,)
    output: Optional[str] = None
    format: str = 'csv'
    workers: int = 1
    document: Dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def from_json(cls, document: Dict[str, Any]) -> 'ExperimentConfig':
        """Validate and parse a config document

        :raises ConfigValidationError: with the path of the offending field
        """
        validate_document(EXPERIMENT_CONFIG_SCHEMA, document)
        spec = SequenceSpec.from_json(document['spec'], 'spec')
        seeds = tuple(document.get('seeds') or (spec.seed,))
        if spec.is_random and None in seeds:
            raise ConfigValidationError(f'{spec.kind} sequences need a seed', 'seeds')
        gammas = _parse_reals(document['gammas'], 'gammas')
        for index, gamma in enumerate(gammas):
            if not 0 <= gamma < 1:
                raise ConfigValidationError(f'{gamma} is not in [0, 1)', f'gammas[{index}]')
        s_values = _parse_reals(document['s_values'], 's_values')
        for index, scale in enumerate(s_values):
            if scale <= 0:
                raise ConfigValidationError(f'{scale} is not positive', f's_values[{index}]')
        schedule = tuple(document['n_schedule'])
        for index, (prev, item) in enumerate(pairwise(schedule)):
            if item <= prev:
                raise ConfigValidationError(f'{item} does not exceed {prev}', f'n_schedule[{index + 1}]')
        return cls(spec, gammas, s_values, schedule, seeds, document.get('output'),
                   document.get('format', 'csv'), document.get('workers', 1), document)

    @classmethod
    def from_file(cls, path: str, overrides: Optional[Dict[str, Any]] = None) -> 'ExperimentConfig':
        """Read a JSON config file, merge `overrides` into it and parse the result

        A `spec` override replaces the file's spec as a whole; other keys are merged recursively.

        :raises ConfigValidationError: the file is not JSON or fails validation
        :raises OSError: the file cannot be read
        """
        with open(path, encoding='utf-8') as source:
            try:
                document = json.load(source)
            except json.JSONDecodeError as err:
                raise ConfigValidationError(f'invalid JSON: {err}') from err
        if overrides:
            document = merge(document, {key: value for key, value in overrides.items() if key != 'spec'})
            if overrides.get('spec') is not None:
                document['spec'] = overrides['spec']
        return cls.from_json(document)


def _parse_reals(values: Sequence[Any], name: str) -> Tuple[Fraction, ...]:
    parsed = []
    for index, value in enumerate(values):
        try:
            parsed.append(to_fraction(value))
        except PreconditionError as err:
            raise ConfigValidationError(str(err), f'{name}[{index}]') from err
    return tuple(parsed)


@dataclass
class ExperimentReport():
    """Rows in config order plus run metadata; presets also carry their graded criteria"""
    rows: List[PairCountResult]
    metadata: Dict[str, Any]
    criteria: List[Criterion] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True unless a graded criterion failed"""
        return all(c.passed is not False for c in self.criteria)

    def summary_lines(self) -> List[str]:
        """One ``PASS``/``FAIL``/``INFO`` line per criterion"""
        lines = []
        for criterion in self.criteria:
            status = 'INFO' if criterion.passed is None else 'PASS' if criterion.passed else 'FAIL'
            policy = ' (statistical threshold, tool policy)' if criterion.statistical else ''
            lines.append(f'{status} {criterion.name}: {criterion.detail}{policy}')
        return lines


def _metadata(config: Dict[str, Any], started: float, **extra: Any) -> Dict[str, Any]:
    metadata = {'config': config, 'generator': GENERATOR_ALGORITHM, 'version': __release__,
                'wall_clock_seconds': round(time.perf_counter() - started, 3)}
    metadata.update(extra)
    return metadata


def _run_seed(config: ExperimentConfig, seed: Optional[int]) -> List[PairCountResult]:
    spec = config.spec if seed is None else config.spec.with_seed(seed)
    started = time.perf_counter()
    sequence = spec.materialize(config.n_schedule[-1])
    counters = {n: pair_counter(sequence.prefix(n)) for n in config.n_schedule}
    density = spec.density_model()
    rows = []
    for gamma in config.gammas:
        overlap = None if density is None else density_overlap(density, gamma)
        for scale in config.s_values:
            expected = expected_limit(scale, overlap)
            rows.extend(counters[n].result(gamma, scale, expected, seed) for n in config.n_schedule)
    LOGGER.debug('seed %s: %d rows in %.3fs', seed, len(rows), time.perf_counter() - started)
    return rows


def cmd_r2(config: ExperimentConfig) -> ExperimentReport:
    """Evaluate R₂ for every seed × γ × s × N, one generated sequence per seed

    Row order follows the config order whatever the worker count. The report is written to
    ``config.output`` when set.

    :raises OSError: the report cannot be written
    """
    started = time.perf_counter()
    LOGGER.info('r2: %s, %d seed(s), %d gamma(s), %d scale(s), N up to %d', config.spec.kind,
                len(config.seeds), len(config.gammas), len(config.s_values), config.n_schedule[-1])
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        per_seed = list(pool.map(lambda seed: _run_seed(config, seed), config.seeds))
    rows = [row for chunk in per_seed for row in chunk]
    report = ExperimentReport(rows, _metadata(config.document, started,
                                              seeds=[s for s in config.seeds if s is not None]))
    if config.output:
        write_report(report, config.format, config.output)
    LOGGER.info('r2: %d rows in %.2fs', len(rows), report.metadata['wall_clock_seconds'])
    return report


#: default parameters of each preset; ``--set key=value`` overrides them
PRESET_DEFAULTS: Dict[str, Dict[str, Any]] = {
    'thm1': {'gamma': Fraction(1, 4), 'delta': Fraction(1, 16), 'n': 100_000, 's': Fraction(1),
             'seeds': 20, 'seed': 0, 'tolerance': Fraction(5, 100), 'tolerance_zero': Fraction(3, 10)},
    'thm3': {'gamma': Fraction(1, 2), 'epsilon': None, 'stage': 10, 'grid_stage': 10},
    'thm4': {'gamma1': Fraction(3, 10), 'gamma2': Fraction(15, 100), 'n': 50_000, 's': Fraction(1),
             's_lower': Fraction(1, 5), 'seeds': 10, 'seed': 0, 'tolerance': Fraction(1, 10)},
    'doubling': {'instances': 50, 'max_n': 500, 'seed': 0},
}


def _preset_parameters(name: str, overrides: Optional[Dict[str, str]]) -> Dict[str, Any]:
    if name not in PRESET_DEFAULTS:
        raise PreconditionError(f'unknown theorem preset {name!r}, expected one of {sorted(PRESET_DEFAULTS)}')
    params = dict(PRESET_DEFAULTS[name])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise PreconditionError(f'{name} has no parameter {key!r}, expected one of {sorted(params)}')
        if isinstance(params[key], int) and not isinstance(params[key], bool):
            try:
                params[key] = int(value)
            except ValueError as err:
                raise PreconditionError(f'{key} must be an integer, got {value!r}') from err
        else:
            params[key] = to_fraction(value)
    return params


def _echo(params: Dict[str, Any]) -> Dict[str, Any]:
    return {key: str(value) if isinstance(value, Fraction) else value for key, value in params.items()}


def _seed_list(params: Dict[str, Any]) -> List[int]:
    if params['seeds'] < 1:
        raise PreconditionError(f'seeds must be at least 1, got {params["seeds"]}')
    return list(range(params['seed'], params['seed'] + params['seeds']))


def _mean_r2(rows: Sequence[PairCountResult]) -> float:
    return float(np.mean([float(row.r2) for row in rows]))


def _thm1(params: Dict[str, Any]) -> Tuple[List[PairCountResult], List[Criterion]]:
    density = theorem1_density(params['gamma'], params['delta'])
    gamma, scale, n = params['gamma'], params['s'], params['n']
    overlap_gamma, overlap_zero = density_overlap(density, gamma), density_overlap(density, 0)
    at_gamma, at_zero = [], []
    for seed in _seed_list(params):
        counter = FloatPairCounter(sample_density(density, n, seed).points)
        at_gamma.append(counter.result(gamma, scale, expected_limit(scale, overlap_gamma), seed))
        at_zero.append(counter.result(0, scale, expected_limit(scale, overlap_zero), seed))
    mean_gamma, mean_zero = _mean_r2(at_gamma), _mean_r2(at_zero)
    target_gamma, target_zero = at_gamma[0].expected, at_zero[0].expected
    criteria = [
        Criterion('overlap-at-gamma', abs(float(overlap_gamma) - 1) <= 1e-12, f'd(gamma) = {overlap_gamma}', False),
        Criterion('overlap-at-zero', None, f'd(0) = {overlap_zero}', False),
        Criterion('gamma-ppc', abs(mean_gamma - target_gamma) <= params['tolerance'],
                  f'mean R2(gamma) = {mean_gamma:.5f}, limit {target_gamma:.5f}', True),
        Criterion('homogeneous-ppc-fails', abs(mean_zero - target_zero) <= params['tolerance_zero'],
                  f'mean R2(0) = {mean_zero:.5f}, limit {target_zero:.5f} != {2 * float(scale):.5f}', True),
    ]
    return at_gamma + at_zero, criteria


def _thm3(params: Dict[str, Any]) -> Tuple[List[PairCountResult], List[Criterion]]:
    stage, gamma = params['stage'], params['gamma']
    length = 2 * stage * (1 << stage)
    sequence = thm3_interleaved(length, gamma, params['epsilon'])
    counter = ExactPairCounter(sequence.points)
    # shifted pairs stay (epsilon/6)/2^N apart, so counts at gamma vanish while 3s <= N*epsilon
    limit = stage * sequence.spec.params['epsilon'] / 3
    scales = sorted({s for s in (Fraction(1, 2), Fraction(1), limit) if s <= limit})
    rows = [counter.result(gamma, s) for s in scales]
    criteria = [Criterion('zero-count', all(row.count == 0 for row in rows),
                          f'counts {[row.count for row in rows]} at M={length}, s in {[str(s) for s in scales]}',
                          False)]
    if to_fraction(gamma) == Fraction(1, 2):
        criteria.append(_min_distance_criterion(params['grid_stage']))
    else:
        criteria.append(Criterion('min-distance', None, 'Y_N and Z_N are only defined for gamma = 1/2', False))
    return rows, criteria


def _min_distance_criterion(max_stage: int) -> Criterion:
    worst = None
    for stage in range(1, max_stage + 1):
        y_points, z_points = thm3_grid_sets(stage)
        distance = min_shifted_distance(y_points + z_points, Fraction(1, 2))
        bound = Fraction(1, 12 << stage)
        LOGGER.debug('min-distance N=%d: %s (bound %s)', stage, distance, bound)
        if distance < bound:
            return Criterion('min-distance', False, f'N={stage}: {distance} < {bound}', False)
        worst = distance / bound if worst is None else min(worst, distance / bound)
    return Criterion('min-distance', True, f'N <= {max_stage}, smallest distance/bound = {worst}', False)


def _thm4(params: Dict[str, Any]) -> Tuple[List[PairCountResult], List[Criterion]]:
    gamma1, gamma2, n = params['gamma1'], params['gamma2'], params['n']
    lower_rows, stat_rows = [], []
    for seed in _seed_list(params):
        base = SequenceSpec('iid_uniform', {}, seed).materialize(n)
        exact_base = generated(tuple(Fraction(p) for p in base.points.tolist()))
        lower_rows.append(ExactPairCounter(thm4_doubled(exact_base, gamma2).points).result(
            gamma2, params['s_lower'], seed=seed))
        stat_rows.append(FloatPairCounter(thm4_doubled(base, gamma2).points).result(
            gamma1, params['s'], 2 * float(params['s']), seed))
    decomposition = thm4_decomposition(SequenceSpec('iid_uniform', {}, params['seed']).materialize(
        min(n, 500)).points, gamma1, gamma2, params['s'])
    mean = _mean_r2(stat_rows)
    criteria = [
        Criterion('lower-bound', all(row.count >= n for row in lower_rows),
                  f'min count at gamma2 = {min(row.count for row in lower_rows)} >= N = {n}', False),
        Criterion('decomposition', decomposition.residual == 0, f'residual {decomposition.residual}', False),
        Criterion('gamma1-ppc', abs(mean - 2 * float(params['s'])) <= params['tolerance'],
                  f'mean R2(gamma1) = {mean:.5f}, limit {2 * float(params["s"]):.5f}', True),
    ]
    return lower_rows + stat_rows, criteria


def doubling_instances(seed: int, instances: int, max_n: int) -> List[Tuple[np.ndarray, float]]:
    """Seeded (points, s) instances with s/N < 1/4

    Points are multiples of 2**-20, so every float operation of the counting kernels on them is
    exact; even instances are dilations ``{n·x}``, odd ones i.i.d. draws.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    cases = []
    for index in range(instances):
        n = int(rng.integers(10, max_n + 1))
        if index % 2 == 0:
            x = Fraction(int(rng.integers(1, 1 << 20)), 1 << 20)
            points = np.asarray([float(k * x % 1) for k in range(1, n + 1)], dtype=np.float64)
        else:
            points = rng.integers(0, 1 << 20, n) / float(1 << 20)
        cases.append((points, n / 4 * float(rng.uniform(0.05, 0.95))))
    return cases


def _doubling(params: Dict[str, Any]) -> Tuple[List[PairCountResult], List[Criterion]]:
    rows, residuals, mismatches = [], [], 0
    for points, scale in doubling_instances(params['seed'], params['instances'], params['max_n']):
        check = doubling_check(points, scale)
        naive_left = r2_count_naive(np.mod(2 * points, 1.0), 0, 2 * scale).count
        naive_right = r2_count_naive(points, 0, scale).count + r2_count_naive(points, 0.5, scale).count
        mismatches += int(naive_left != check.left or naive_right != check.right_sum)
        residuals.append(check.residual)
        rows.append(PairCountResult(points.size, 0, 2 * scale, check.left))
    criteria = [
        Criterion('residual', all(r == 0 for r in residuals), f'residuals {sorted(set(residuals))}', False),
        Criterion('naive-agreement', mismatches == 0, f'{mismatches} instance(s) differ from naive counts', False),
    ]
    return rows, criteria


_PRESETS = {'thm1': _thm1, 'thm3': _thm3, 'thm4': _thm4, 'doubling': _doubling}


def cmd_theorem(name: str, overrides: Optional[Dict[str, str]] = None) -> ExperimentReport:
    """Run a named preset and grade it

    :param name: ``thm1``, ``thm3``, ``thm4`` or ``doubling``
    :param overrides: ``{parameter: value}`` replacing preset defaults
    :raises PreconditionError: unknown preset or parameter, or invalid parameter values
    """
    params = _preset_parameters(name, overrides)
    started = time.perf_counter()
    LOGGER.info('theorem %s: %s', name, _echo(params))
    rows, criteria = _PRESETS[name](params)
    report = ExperimentReport(rows, _metadata({'preset': name, 'parameters': _echo(params)}, started),
                              criteria)
    for line in report.summary_lines():
        LOGGER.info('%s', line)
    return report


def _oracle_instances(seed: int, count: int) -> List[Tuple[np.ndarray, float, float]]:
    rng = np.random.Generator(np.random.PCG64(seed))
    gammas, scales = (0.0, 0.1, 0.25, 0.5), (0.1, 1.0, 5.0)
    cases = []
    for index in range(count):
        gamma, scale = gammas[index % 4], scales[index % 3]
        if index % 10 == 0:
            # dyadic points at a dyadic radius put many pairs exactly on the window edge
            n = (20, 40, 80)[index // 10 % 3]
            cases.append((rng.integers(0, 64, n) / 64.0, gamma, 5.0))
        else:
            n = int(rng.integers(10, 2001))
            cases.append((rng.random(n), gamma, scale))
    return cases


def _check_oracle(kernel: Kernel, failures: List[Dict[str, Any]]) -> None:
    for index, (points, gamma, scale) in enumerate(_oracle_instances(0, 100)):
        expected = r2_count_naive(points, gamma, scale).count
        found = kernel(points, gamma, scale).count
        if found != expected:
            failures.append({'invariant': 'oracle-equivalence', 'detail':
                             f'instance {index}: N={points.size} gamma={gamma} s={scale}: '
                             f'fast {found} != naive {expected}'})
            return


def _check_exact_oracle(failures: List[Dict[str, Any]]) -> None:
    samples = [SequenceSpec('vdc').materialize(64).points, thm3_interleaved(48, Fraction(1, 2)).points]
    for points in samples:
        for gamma in (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)):
            for scale in (Fraction(1, 2), Fraction(1), Fraction(3)):
                fast, naive = r2_count_exact(points, gamma, scale).count, r2_count_naive(points, gamma, scale).count
                if fast != naive:
                    failures.append({'invariant': 'exact-oracle-equivalence', 'detail':
                                     f'N={len(points)} gamma={gamma} s={scale}: {fast} != {naive}'})
                    return


def _check_symmetry(failures: List[Dict[str, Any]]) -> None:
    rng = np.random.Generator(np.random.PCG64(1))
    for _ in range(5):
        counter = ExactPairCounter([Fraction(p) for p in rng.random(300).tolist()])
        for gamma in (Fraction(0), Fraction(1, 10), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)):
            for scale in (Fraction(1, 10), Fraction(1), Fraction(5)):
                left, right = counter.count(gamma, scale), counter.count(1 - gamma, scale)
                if left != right:
                    failures.append({'invariant': 'symmetry',
                                     'detail': f'gamma={gamma} s={scale}: {left} != {right}'})
                    return


def _check_theorem3(failures: List[Dict[str, Any]], max_stage: int) -> None:
    criterion = _min_distance_criterion(max_stage)
    if not criterion.passed:
        failures.append({'invariant': 'min-distance', 'detail': criterion.detail})
    points = thm3_interleaved(2 * 6 * (1 << 6), Fraction(1, 2)).points
    counter = ExactPairCounter(points)
    for scale in (Fraction(1, 2), Fraction(1)):
        if counter.count(Fraction(1, 2), scale):
            failures.append({'invariant': 'thm3-zero-count', 'detail': f'M={len(points)} s={scale}'})


def _check_thm4(failures: List[Dict[str, Any]]) -> None:
    base = generated(SequenceSpec('vdc').materialize(100).points)
    gamma1, gamma2 = Fraction(3, 10), Fraction(3, 20)
    decomposition = thm4_decomposition(base.points, gamma1, gamma2, 1)
    if decomposition.residual:
        failures.append({'invariant': 'thm4-decomposition', 'detail': f'residual {decomposition.residual}'})
    doubled = thm4_doubled(base, gamma2)
    count = ExactPairCounter(doubled.points).count(gamma2, Fraction(1, 5))
    if count < base.length:
        failures.append({'invariant': 'thm4-lower-bound', 'detail': f'count {count} < N = {base.length}'})


def _check_doubling(failures: List[Dict[str, Any]]) -> None:
    _, criteria = _doubling(dict(PRESET_DEFAULTS['doubling']))
    for criterion in criteria:
        if not criterion.passed:
            failures.append({'invariant': 'doubling', 'detail': f'{criterion.name}: {criterion.detail}'})


def _check_densities(failures: List[Dict[str, Any]]) -> None:
    grid = [(gamma, gamma / k) for gamma in (Fraction(1, 8), Fraction(1, 6), Fraction(1, 5), Fraction(1, 4),
                                             Fraction(1, 3)) for k in (2, 4, 8)]
    grid += [(Fraction(1, 2), delta) for delta in (Fraction(1, 3), Fraction(1, 4), Fraction(1, 8),
                                                    Fraction(1, 16), Fraction(1, 32))]
    for gamma, delta in grid:
        overlap = density_overlap(theorem1_density(gamma, delta), gamma)
        if abs(float(overlap) - 1) > 1e-12:
            failures.append({'invariant': 'density-overlap',
                             'detail': f'theorem1 gamma={gamma} delta={delta}: d(gamma) = {overlap}'})
    for gamma, epsilon in ((Fraction(1, 4), Fraction(1, 16)), (Fraction(1, 8), Fraction(1, 16)),
                           (Fraction(3, 8), Fraction(1, 32))):
        overlap = density_overlap(theorem3_density(gamma, epsilon), gamma)
        if abs(float(overlap) - float(1 / (4 * epsilon))) > 1e-12:
            failures.append({'invariant': 'density-overlap',
                             'detail': f'theorem3 gamma={gamma} epsilon={epsilon}: d(gamma) = {overlap}'})


def cmd_verify(kernel: Optional[Kernel] = None, max_stage: int = 10) -> VerifyOutcome:
    """Run the exact invariant suite

    :param kernel: replacement for the fast float kernel in the oracle-equivalence check
    :param max_stage: largest N of the Y_N ∪ Z_N min-distance enumeration
    :return: status 0 when every invariant holds, 1 otherwise, with one failure entry per
             violated invariant
    """
    failures: List[Dict[str, Any]] = []
    checks = [
        ('oracle-equivalence', lambda: _check_oracle(kernel or r2_count_fast, failures)),
        ('exact-oracle-equivalence', lambda: _check_exact_oracle(failures)),
        ('symmetry', lambda: _check_symmetry(failures)),
        ('min-distance', lambda: _check_theorem3(failures, max_stage)),
        ('thm4', lambda: _check_thm4(failures)),
        ('doubling', lambda: _check_doubling(failures)),
        ('density-overlap', lambda: _check_densities(failures)),
    ]
    for name, check in checks:
        started = time.perf_counter()
        check()
        LOGGER.info('verify %s: %.2fs', name, time.perf_counter() - started)
    for failure in failures:
        LOGGER.error('invariant %s failed: %s', failure['invariant'], failure['detail'])
    return VerifyOutcome(1 if failures else 0, failures, [name for name, _ in checks])
