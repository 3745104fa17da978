import numpy as np
import pytest

from pdmlab import Grid, OrderingParams, PctMap, build_von_roos, builtin, eigendecompose, oscillator_field


@pytest.fixture(scope="session")
def poly1():
    return builtin("poly1")


@pytest.fixture(scope="session")
def const():
    return builtin("const")


@pytest.fixture(scope="session")
def soliton():
    return builtin("soliton")


@pytest.fixture(scope="session")
def box():
    return Grid(-10.0, 10.0, 2001)


def oscillator_problem(profile, grid, a=-0.25, levels=6):
    pmap = PctMap(profile, x_range=(grid.x_min, grid.x_max))
    H = build_von_roos(profile, OrderingParams.from_ab(a), grid, oscillator_field(pmap, grid))
    return pmap, H, eigendecompose(H, levels)


@pytest.fixture(scope="session")
def poly1_mm(poly1, box):
    return oscillator_problem(poly1, box)


@pytest.fixture(scope="session")
def const_mm(const, box):
    return oscillator_problem(const, box)


@pytest.fixture
def rng():
    return np.random.default_rng(7)
