import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from tabalg import bundled, load
from tabalg.deduction import PartialTable, propagate


@pytest.fixture(scope="session")
def B32():
    return load("B32")


@pytest.fixture(scope="session")
def B22():
    return load("B22")


@pytest.fixture(scope="session")
def D17():
    return load("D17")


@pytest.fixture(scope="session")
def C7():
    return load("C7")


@pytest.fixture(scope="session")
def all_bundled():
    return bundled()


def lemma72_seed(B32):
    """Basis of B32, the full C and D tables, and the three hypothesis
    products b3*b3bar, b3*b3, b3*c3bar."""
    idx = B32.basis.index_of
    d_names = [
        "1", "b8", "x10", "b5", "c5", "c8", "x9",
        "c3", "c3bar", "d3", "d3bar", "c9", "c9bar", "b6", "b6bar", "y15", "y15bar",
    ]
    d = [idx(n) for n in d_names]
    seed = PartialTable.from_subtable(B32, [(i, j) for i in d for j in d if i <= j])
    seed.set_product(idx("b3"), idx("b3bar"), {0: 1, idx("b8"): 1})
    seed.set_product(idx("b3"), idx("b3"), {idx("c3"): 1, idx("b6"): 1})
    seed.set_product(idx("b3"), idx("c3bar"), {idx("b3bar"): 1, idx("x6bar"): 1})
    return seed


@pytest.fixture(scope="session")
def lemma72_run(B32):
    """The (table, trace) fixed point of the Lemma-7.2-style seed, shared
    across test modules because it takes a few seconds."""
    seed = lemma72_seed(B32)
    return propagate(seed, max_steps=10**6, introduce_names=True)
