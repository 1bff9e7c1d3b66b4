import random

import pytest
from hypothesis import strategies as st

from canonext import corpus


@pytest.fixture(scope="session")
def lat():
    return corpus.lattices()


@pytest.fixture(scope="session")
def pres():
    return corpus.presentations()


@pytest.fixture(scope="session")
def algs():
    return corpus.algebras()


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_for(seed):
    return random.Random(seed)


def by_label(L, *names):
    return tuple(L.index(s) for s in names)
