# pylint: disable=missing-module-docstring,missing-function-docstring,redefined-outer-name
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from gamma_ppc.density import uniform_density
from gamma_ppc.errors import ConfigValidationError, PreconditionError
from gamma_ppc.sequences import (SequenceSpec, block_index, dilated_sequence, export_sequence_csv,
                                 generated, sample_density, thm3_grid_sets, thm3_interleaved,
                                 thm3_term, thm3_yz, thm4_doubled, van_der_corput)

F = Fraction


@pytest.mark.parametrize('n, expected', [(1, F(0)), (2, F(1, 2)), (3, F(1, 4)), (6, F(5, 8))])
def test_van_der_corput(n, expected):
    assert van_der_corput(n) == expected

def test_van_der_corput_blocks_are_dyadic_grids():
    for k in range(13):
        assert {van_der_corput(n) for n in range(1, (1 << k) + 1)} == {F(j, 1 << k) for j in range(1 << k)}
    with pytest.raises(PreconditionError):
        van_der_corput(0)

def test_block_index():
    assert [block_index(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]

def test_thm3_yz():
    assert thm3_yz(1, F(1, 2)) == (0, F(5, 6))
    assert thm3_yz(2, F(1, 2), F(1, 2)) == (F(1, 4), F(11, 12))
    assert thm3_yz(3, F(1, 4), F(1, 16)) == (F(1, 64), F(1, 4) + F(1, 64) + F(1, 12))
    with pytest.raises(PreconditionError):
        thm3_yz(1, F(1, 2), F(1, 4))
    with pytest.raises(PreconditionError):
        thm3_yz(1, F(1, 4))

def test_thm3_interleaved_prefixes():
    assert thm3_interleaved(4, F(1, 2)).points == (0, F(5, 6), F(1, 4), F(11, 12))
    points = thm3_interleaved(16, F(1, 2)).points
    assert points[4:8] == points[:4]
    assert points.count(F(0)) == 2

def test_thm3_interleaved_multiplicities():
    stage = 3
    points = thm3_interleaved(2 * stage << stage, F(1, 2)).points
    counts = Counter(points)
    for n in range(1, (1 << stage) + 1):
        y, z = thm3_yz(n, F(1, 2))
        assert counts[y] == stage
        assert counts[z] == stage

def test_thm3_interleaved_random_access():
    full = thm3_interleaved(100, F(1, 4), F(1, 16)).points
    assert thm3_interleaved(30, F(1, 4), F(1, 16), start=40).points == full[40:70]
    assert [thm3_term(n, F(1, 4), F(1, 16)) for n in (1, 17, 99)] == [full[0], full[16], full[98]]

def test_thm3_ranges():
    gamma, epsilon = F(1, 4), F(1, 16)
    for n in range(1, 65):
        y, z = thm3_yz(n, gamma, epsilon)
        assert 0 <= y <= epsilon
        assert gamma <= z < 1

def test_thm3_grid_sets():
    y_points, z_points = thm3_grid_sets(1)
    assert len(y_points) == 4
    assert (min(y_points), max(y_points)) == (0, F(3, 8))
    for stage in range(1, 6):
        assert min(thm3_grid_sets(stage)[1]) == F(1, 2) + F(1, 3 << (stage + 1))
    with pytest.raises(PreconditionError):
        thm3_grid_sets(2, F(1, 4), F(1, 16))

def test_thm3_prefix_lies_in_grid_sets():
    stage = 3
    y_points, z_points = thm3_grid_sets(stage)
    allowed = set(y_points) | set(z_points)
    assert set(thm3_interleaved(2 * (stage + 1) << (stage + 1), F(1, 2)).points) <= allowed

def test_thm4_doubled():
    doubled = thm4_doubled(generated([0.2, 0.7]), 0.15)
    assert doubled.points.tolist() == pytest.approx([0.2, 0.35, 0.7, 0.85])
    assert thm4_doubled(generated([0.9]), 0.3).points.tolist() == pytest.approx([0.9, 0.2])
    exact = thm4_doubled(generated([F(1, 2), F(9, 10)]), '3/10')
    assert exact.points == (F(1, 2), F(4, 5), F(9, 10), F(1, 5))
    assert len(exact) == 4
    with pytest.raises(PreconditionError):
        thm4_doubled(generated([]), 0.1)

def test_sample_density(thm1_density):
    first = sample_density(thm1_density, 10_000, seed=5)
    assert first.length == 10_000
    assert np.all(first.points < 5 / 16)
    assert np.all(first.points >= 0)
    assert np.array_equal(first.points, sample_density(thm1_density, 10_000, seed=5).points)
    assert sample_density(thm1_density, 0, seed=5).length == 0

def test_sample_density_ranges_concatenate(thm1_density):
    whole = sample_density(thm1_density, 200, seed=11).points
    head = sample_density(thm1_density, 120, seed=11).points
    tail = sample_density(thm1_density, 80, seed=11, start=120).points
    assert np.array_equal(whole, np.concatenate((head, tail)))

def test_sample_density_needs_a_seed():
    with pytest.raises(PreconditionError):
        sample_density(uniform_density(), 10, seed=None)

def test_dilated_sequence():
    assert dilated_sequence(1, 0.5, 3).points.tolist() == [0.5, 0.0, 0.5]
    single, double = dilated_sequence(1, 0.1, 50).points, dilated_sequence(2, 0.1, 50).points
    assert double == pytest.approx(np.mod(2 * single, 1.0), abs=1e-12)
    irrational = dilated_sequence(1, 2 ** 0.5, 100).points
    assert np.all((irrational >= 0) & (irrational < 1))

def test_spec_documents():
    spec = SequenceSpec.from_json({'kind': 'thm4_doubled', 'seed': 3, 'params': {
        'base': {'kind': 'iid_uniform'}, 'gamma2': '3/20'}})
    assert spec.is_random
    assert spec.params['base'].seed == 3
    assert spec.params['gamma2'] == F(3, 20)
    assert SequenceSpec.from_json(spec.to_json()) == spec
    other = spec.with_seed(4)
    assert other.params['base'].seed == 4
    assert spec.materialize(10).points.tolist() != other.materialize(10).points.tolist()

def test_spec_materialize_is_deterministic():
    spec = SequenceSpec.from_json({'kind': 'iid_density', 'seed': 9, 'params': {
        'density': {'kind': 'theorem1', 'gamma': '1/4', 'delta': '1/16'}}})
    assert np.array_equal(spec.materialize(500).points, spec.materialize(500).points)
    assert spec.density_model().values == (4, F(8, 3), 4, 0)
    assert SequenceSpec('vdc').density_model() is None

@pytest.mark.parametrize('document, path', [
    ({'kind': 'iid_uniform'}, 'seed'),
    ({'kind': 'nope'}, 'kind'),
    ({'kind': 'thm3_interleaved', 'params': {'gamma': '1/4', 'epsilon': '1/4'}}, 'params'),
    ({'kind': 'thm3_interleaved', 'params': {}}, 'params'),
    ({'kind': 'dilated', 'params': {'multiplier': 0, 'x': 0.5}}, 'params.multiplier'),
])
def test_spec_errors(document, path):
    with pytest.raises(ConfigValidationError) as excinfo:
        SequenceSpec.from_json(document)
    assert excinfo.value.path == path

def test_export_sequence_csv(tmp_path):
    path = tmp_path / 'vdc.csv'
    export_sequence_csv(SequenceSpec('vdc').materialize(4), str(path))
    assert path.read_text(encoding='utf-8').splitlines() == ['0', '1/2', '1/4', '3/4']
    floats = dilated_sequence(1, 0.5, 2)
    assert list(floats.csv_lines()) == ['0.5', '0.0']
    assert SequenceSpec('vdc').materialize(4).as_floats().tolist() == [0.0, 0.5, 0.25, 0.75]
    assert floats.as_floats().dtype == np.float64

def test_direct_calls_carry_their_spec(thm1_density):
    drawn = sample_density(thm1_density, 300, seed=5)
    assert drawn.spec.seed == 5
    assert drawn.spec.density_model() == thm1_density
    assert np.array_equal(drawn.spec.materialize(300).points, drawn.points)
    dilated = dilated_sequence(2, 0.1, 40)
    assert dilated.spec == SequenceSpec.from_json({'kind': 'dilated', 'params': {'multiplier': 2, 'x': 0.1}})
    assert np.array_equal(dilated.spec.materialize(40).points, dilated.points)

def test_dilated_reads_floats_by_their_decimal_form():
    assert dilated_sequence(1, 0.1, 10).points.tolist() == dilated_sequence(1, '1/10', 10).points.tolist()
    assert dilated_sequence(1, 0.1, 10).points[9] == 0.0
