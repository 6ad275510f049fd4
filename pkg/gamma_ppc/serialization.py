"""serialization.py

marshmallow dump schemas for pair-count results, experiment reports and densities, and the CSV and
JSON writers built on them. Both writers go through the same schema, so a CSV and a JSON emission
of one report carry identical numeric text.
"""

import csv
import json
import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, List, TextIO

from marshmallow import Schema, fields

from .utils import format_real

LOGGER = logging.getLogger('gamma_ppc.serialization')

SCHEMA_VERSION = 1

#: CSV column order
CSV_COLUMNS = ('seed', 'n', 'gamma', 's', 'count', 'r2', 'expected', 'abs_err')


def _real(attribute: str):
    def render(obj: Any) -> Any:
        value = getattr(obj, attribute)
        return None if value is None else format_real(value)
    return render


class PairCountResultSchema(Schema):
    """One report row; exact parameters render as ``p/q``, floats via `repr`

    ``r2`` is rendered as the `repr` of its float value; the exact ratio is ``count / n``.
    """
    seed = fields.Integer(allow_none=True)
    n = fields.Integer()
    gamma = fields.Function(_real('gamma'))
    s = fields.Function(_real('s'))
    count = fields.Integer()
    r2 = fields.Function(lambda obj: repr(float(obj.r2)))
    expected = fields.Function(_real('expected'))
    abs_err = fields.Function(_real('abs_err'))

    class Meta:  # pylint: disable=too-few-public-methods
        ordered = True


class ExperimentReportSchema(Schema):
    """``{"schema_version": 1, "metadata": {...}, "rows": [...]}``"""
    schema_version = fields.Function(lambda _obj: SCHEMA_VERSION)
    metadata = fields.Dict()
    rows = fields.List(fields.Nested(PairCountResultSchema))

    class Meta:  # pylint: disable=too-few-public-methods
        ordered = True


def _exact_text(values: Iterable[Any]) -> List[Any]:
    return [format_real(v) if isinstance(v, Fraction) else v for v in values]


class DensitySchema(Schema):
    """Breakpoints and values of a piecewise-constant density

    Exact entries render as ``p/q`` strings; float entries stay JSON numbers and read back as floats.
    """
    breakpoints = fields.Function(lambda obj: _exact_text(obj.breakpoints))
    values = fields.Function(lambda obj: _exact_text(obj.values))

    class Meta:  # pylint: disable=too-few-public-methods
        ordered = True


def dump_rows(rows: Iterable[Any]) -> List[Dict[str, Any]]:
    """Serialize pair-count results to plain dicts"""
    return PairCountResultSchema(many=True).dump(list(rows))


def write_csv(report: Any, stream: TextIO) -> None:
    """Write the report rows as CSV with a header line; missing values are empty cells"""
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator='\n')
    writer.writeheader()
    for row in dump_rows(report.rows):
        writer.writerow({key: '' if value is None else value for key, value in row.items()})


def write_json(report: Any, stream: TextIO) -> None:
    """Write the whole report, metadata included, as one JSON document"""
    json.dump(ExperimentReportSchema().dump(report), stream, indent=2)
    stream.write('\n')


WRITERS = {'csv': write_csv, 'json': write_json}


def write_report(report: Any, fmt: str, path: str) -> None:
    """Write `report` to `path` in `fmt` (``csv`` or ``json``)

    :raises OSError: the file cannot be written
    """
    with open(path, 'w', encoding='utf-8', newline='') as out:
        WRITERS[fmt](report, out)
    LOGGER.info('wrote %d rows to %s (%s)', len(report.rows), path, fmt)
