"""cli.py

The ``gamma-ppc`` command line: ``r2``, ``theorem``, ``verify`` and ``export-sequence``.

Errors raised by the commands are routed through the handlers in :data:`ERROR_HANDLERS`, each of
which logs the error and returns the process exit code.
"""

import io
import json
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Type

import click

from .__about__ import __release__
from .errors import ConfigValidationError, PreconditionError
from .experiments import ExperimentConfig, cmd_r2, cmd_theorem, cmd_verify
from .sequences import SequenceSpec, export_sequence_csv
from .serialization import WRITERS, write_report
from .utils import merge, not_none

LOGGER = logging.getLogger('gamma_ppc.cli')

EXIT_VERIFY_FAILED = 1
EXIT_DATA_ERROR = 65
EXIT_IO_ERROR = 74


def handle_config_validation_exc(error: ConfigValidationError) -> int:
    """Report a document validation failure as ``path: message``"""
    LOGGER.error('invalid configuration: %s', error)
    click.echo(f'error: {error.path}: {error.message}', err=True)
    return EXIT_DATA_ERROR


def handle_precondition_exc(error: PreconditionError) -> int:
    """Report a violated operation precondition"""
    LOGGER.error('precondition failed: %s', error)
    click.echo(f'error: {error}', err=True)
    return EXIT_DATA_ERROR


def handle_os_exc(error: OSError) -> int:
    """Report an unreadable input or unwritable output"""
    LOGGER.error('i/o error: %s', error)
    click.echo(f'error: {error}', err=True)
    return EXIT_IO_ERROR


#: checked in order, so subclasses come before their bases
ERROR_HANDLERS: List[Tuple[Type[BaseException], Callable[[Any], int]]] = [
    (ConfigValidationError, handle_config_validation_exc),
    (PreconditionError, handle_precondition_exc),
    (OSError, handle_os_exc),
]


def _guarded(func: Callable[[], Any]) -> Any:
    try:
        return func()
    except (ConfigValidationError, PreconditionError, OSError) as err:
        handler = next(handler for exc_type, handler in ERROR_HANDLERS if isinstance(err, exc_type))
        raise SystemExit(handler(err)) from err


def _parse_assignments(_ctx: click.Context, _param: click.Parameter,
                       values: Sequence[str]) -> Dict[str, str]:
    assignments = {}
    for item in values:
        key, sep, value = item.partition('=')
        if not sep or not key.strip():
            raise click.BadParameter(f'expected key=value, got {item!r}')
        assignments[key.strip()] = value.strip()
    return assignments


def _load_spec(value: Optional[str]) -> Optional[Dict[str, Any]]:
    """A spec given inline as JSON or as the path of a JSON file"""
    if value is None:
        return None
    if value.lstrip().startswith('{'):
        text = value
    else:
        with open(value, encoding='utf-8') as source:
            text = source.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigValidationError(f'invalid JSON: {err}', 'spec') from err


def _echo_report(report: Any, fmt: str) -> None:
    buffer = io.StringIO()
    WRITERS[fmt](report, buffer)
    click.echo(buffer.getvalue(), nl=False)


@click.group()
@click.version_option(__release__, prog_name='gamma-ppc')
@click.option('-v', '--verbose', is_flag=True, help='Log debug output, kernel timings included.')
@click.option('-q', '--quiet', is_flag=True, help='Only log warnings and errors.')
def main(verbose: bool, quiet: bool) -> None:
    """Pair correlation counts, constructions and checks for sequences mod 1."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s %(message)s')


@main.command('r2')
@click.option('--config', 'config_path', type=click.Path(dir_okay=False),
              help='JSON experiment config; the flags below override its values.')
@click.option('--spec', help='Sequence spec as inline JSON or the path of a JSON file.')
@click.option('--gamma', 'gammas', multiple=True, help='Shift, e.g. 0.25 or 1/3 (repeatable).')
@click.option('--s', 's_values', multiple=True, help='Scale s > 0 (repeatable).')
@click.option('--n', 'n_schedule', multiple=True, type=int, help='Prefix length N (repeatable, increasing).')
@click.option('--seed', 'seeds', multiple=True, type=int, help='Seed for random kinds (repeatable).')
@click.option('--output', type=click.Path(dir_okay=False), help='Report path; stdout when omitted.')
@click.option('--format', 'fmt', type=click.Choice(sorted(WRITERS)), help='Report format (default csv).')
@click.option('--workers', type=int, help='Threads for the per-seed runs.')
def r2_command(config_path: Optional[str], spec: Optional[str], gammas: Tuple[str, ...],
               s_values: Tuple[str, ...], n_schedule: Tuple[int, ...], seeds: Tuple[int, ...],
               output: Optional[str], fmt: Optional[str], workers: Optional[int]) -> None:
    """Evaluate R2(gamma; s, N) over seeds x gammas x scales x prefix lengths."""
    def run() -> None:
        flags = {'spec': _load_spec(spec), 'gammas': list(gammas) or None,
                 's_values': list(s_values) or None, 'n_schedule': list(n_schedule) or None,
                 'seeds': list(seeds) or None, 'output': output, 'format': fmt, 'workers': workers}
        if config_path:
            config = ExperimentConfig.from_file(config_path, flags)
        else:
            config = ExperimentConfig.from_json(not_none(flags))
        report = cmd_r2(config)
        if not config.output:
            _echo_report(report, config.format)
    _guarded(run)


@main.command('theorem')
@click.argument('name', type=click.Choice(['thm1', 'thm3', 'thm4', 'doubling']))
@click.option('--set', 'overrides', multiple=True, callback=_parse_assignments,
              help='Override a preset parameter, e.g. --set n=20000 (repeatable).')
@click.option('--output', type=click.Path(dir_okay=False), help='Write the report rows here.')
@click.option('--format', 'fmt', type=click.Choice(sorted(WRITERS)), default='csv', show_default=True)
def theorem_command(name: str, overrides: Dict[str, str], output: Optional[str], fmt: str) -> None:
    """Run a theorem preset and print one PASS/FAIL line per criterion."""
    report = _guarded(lambda: cmd_theorem(name, overrides))
    for line in report.summary_lines():
        click.echo(line)
    if output:
        _guarded(lambda: write_report(report, fmt, output))
    if not report.passed:
        raise SystemExit(EXIT_VERIFY_FAILED)


@main.command('verify')
@click.option('--max-stage', type=click.IntRange(1, 12), default=10, show_default=True,
              help='Largest N of the min-distance enumeration.')
def verify_command(max_stage: int) -> None:
    """Run the exact invariant suite; exit 1 with a JSON failure list on any violation."""
    outcome = cmd_verify(max_stage=max_stage)
    if outcome.status:
        click.echo(json.dumps({'failures': outcome.failures}, indent=2))
        raise SystemExit(outcome.status)
    click.echo(f'PASS verify: {", ".join(outcome.checked)}')


@main.command('export-sequence')
@click.option('--spec', required=True, help='Sequence spec as inline JSON or the path of a JSON file.')
@click.option('--length', type=click.IntRange(min=0), required=True, help='Number of terms M.')
@click.option('--seed', type=int, help='Seed, overriding the one in the spec.')
@click.option('--output', type=click.Path(dir_okay=False), help='CSV path; stdout when omitted.')
def export_sequence_command(spec: str, length: int, seed: Optional[int], output: Optional[str]) -> None:
    """Write the first LENGTH terms of a sequence, one point per line."""
    def run() -> None:
        document = _load_spec(spec)
        if seed is not None:
            document = merge(document, {'seed': seed})
        sequence = SequenceSpec.from_json(document).materialize(length)
        if output:
            export_sequence_csv(sequence, output)
        else:
            for line in sequence.csv_lines():
                click.echo(line)
    _guarded(run)
