# pylint: disable=missing-module-docstring,missing-function-docstring
import json
from fractions import Fraction

import numpy as np
import pytest
from click.testing import CliRunner

from gamma_ppc import SequenceSpec, theorem1_density


@pytest.fixture
def uniform_points():
    def func(n: int, seed: int = 7) -> np.ndarray:
        return SequenceSpec('iid_uniform', seed=seed).materialize(n).points
    return func

@pytest.fixture
def vdc_points():
    def func(n: int):
        return SequenceSpec('vdc').materialize(n).points
    return func

@pytest.fixture
def thm1_density():
    return theorem1_density(Fraction(1, 4), Fraction(1, 16))

@pytest.fixture
def config_file(tmp_path):
    def func(document) -> str:
        path = tmp_path / 'config.json'
        path.write_text(json.dumps(document), encoding='utf-8')
        return str(path)
    return func

@pytest.fixture
def runner():
    return CliRunner()
