import functools

import pytest

from pprtarget import fixtures
from pprtarget.oracles import dense_solve_all_pairs


@pytest.fixture(scope="session")
def corpus():
    return fixtures.corpus()


@functools.lru_cache(maxsize=None)
def _dense(name, alpha):
    return dense_solve_all_pairs(fixtures.corpus()[name], alpha)


@pytest.fixture(scope="session")
def dense():
    """``dense(name, alpha)`` -> all-pairs matrix for a corpus graph, cached."""
    return _dense
