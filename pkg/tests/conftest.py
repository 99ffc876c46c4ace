import random

import pytest

from reesalg.ring import parse_ring

FINITE = "GF(5)[x,y]/(x^2, x*y, y^2)"


@pytest.fixture(scope="session")
def qx():
    return parse_ring("QQ[x]")


@pytest.fixture(scope="session")
def qxy():
    return parse_ring("QQ[x,y]")


@pytest.fixture(scope="session")
def fin():
    return parse_ring(FINITE)


@pytest.fixture
def rng():
    return random.Random(20240611)
