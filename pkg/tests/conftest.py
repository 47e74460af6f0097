from pathlib import Path

import numpy as np
import pytest

from gate_cache import reset_cache
from gate_forge import TruthTable
from sim_config import reset_config

FIXTURES = Path(__file__).parent / 'fixtures'


def table(n_in, n_out, outputs):
    """Truth table from the outputs listed in input order."""
    width = n_in
    return TruthTable(n_in, n_out, {format(i, f'0{width}b'): y for i, y in enumerate(outputs)})


@pytest.fixture(autouse=True)
def _fresh_config():
    """Each test sees configuration and a gate cache built from its own environment."""
    reset_config()
    reset_cache()
    yield
    reset_config()
    reset_cache()


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def constant_table():
    return table(3, 1, ['0'] * 8)


@pytest.fixture
def balanced_table():
    # f = 1 on 000, 010, 011, 111
    return table(3, 1, ['1', '0', '1', '1', '0', '0', '0', '1'])


@pytest.fixture
def period2_table():
    return table(3, 3, ['001', '111'] * 4)


@pytest.fixture
def period4_table():
    return table(3, 3, ['000', '010', '100', '110'] * 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
