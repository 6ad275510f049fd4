# pylint: disable=missing-module-docstring,missing-function-docstring
import io
import json
from fractions import Fraction

from gamma_ppc.counting import PairCountResult
from gamma_ppc.density import PiecewiseConstantDensity, theorem1_density
from gamma_ppc.experiments import ExperimentReport
from gamma_ppc.serialization import CSV_COLUMNS, DensitySchema, dump_rows, write_csv, write_json, write_report

F = Fraction

ROWS = [PairCountResult(8, F(0), 1, 16), PairCountResult(100, F(1, 4), 1, 190, expected=2.0, seed=7)]


def test_dump_rows():
    plain, attached = dump_rows(ROWS)
    assert list(plain) == list(CSV_COLUMNS)
    assert plain['gamma'] == '0'
    assert plain['r2'] == '2.0'
    assert plain['expected'] is None
    assert attached['gamma'] == '1/4'
    assert attached['r2'] == '1.9'
    assert attached['expected'] == '2.0'
    assert float(attached['abs_err']) == abs(1.9 - 2.0)

def test_csv():
    stream = io.StringIO()
    write_csv(ExperimentReport(ROWS, {}), stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == 'seed,n,gamma,s,count,r2,expected,abs_err'
    assert lines[1] == ',8,0,1,16,2.0,,'
    assert lines[2].startswith('7,100,1/4,1,190,1.9,2.0,')

def test_json_matches_csv_values():
    stream = io.StringIO()
    write_json(ExperimentReport(ROWS, {'version': 'x'}), stream)
    document = json.loads(stream.getvalue())
    assert list(document) == ['schema_version', 'metadata', 'rows']
    assert document['schema_version'] == 1
    assert document['metadata'] == {'version': 'x'}
    assert document['rows'] == dump_rows(ROWS)

def test_write_report(tmp_path):
    path = tmp_path / 'out.csv'
    write_report(ExperimentReport(ROWS, {}), 'csv', str(path))
    assert len(path.read_text(encoding='utf-8').splitlines()) == 3

def test_density_schema(thm1_density):
    assert DensitySchema().dump(thm1_density) == {'breakpoints': ['0', '1/16', '1/4', '5/16', '1'],
                                                  'values': ['4', '8/3', '4', '0']}

def test_density_json_keeps_floats():
    density = theorem1_density(F(1, 4), F(1, 8))
    document = density.to_json()
    assert document == DensitySchema().dump(density)
    assert all(isinstance(value, float) for value in document['values'])
    assert PiecewiseConstantDensity.from_json(json.loads(json.dumps(document))) == density
