import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from pdmlab import Grid, PctMap, builtin, cruz_corrected_potential, effective_potential, oscillator_potential
from pdmlab import parse_profile, uniqueness_conditions
from pdmlab.potentials import PotentialField, cruz_terms, oscillator_field, ordering_functions

PROFILES = ["const", "poly1", "soliton", "rational"]


@pytest.fixture(scope="module")
def maps():
    return {n: PctMap(builtin(n)) for n in PROFILES}


def test_oscillator_examples(maps):
    assert oscillator_potential(maps["const"], 2.0) == pytest.approx(2.0, abs=1e-12)
    q1 = (math.sqrt(2) + math.asinh(1.0)) / 2
    assert oscillator_potential(maps["poly1"], 1.0) == pytest.approx(q1**2 / 2, abs=1e-12)
    # the quoted 7-digit figure is off by one unit in the last place
    assert oscillator_potential(maps["poly1"], 1.0) == pytest.approx(0.6587153, abs=1e-6)
    far = oscillator_potential(maps["soliton"], 1e8)
    assert far == pytest.approx((math.pi / 2) ** 2 / 2, abs=1e-7)
    assert far == pytest.approx(1.2337006, abs=1e-7)


def test_oscillator_field_minimum_at_anchor(maps):
    g = Grid(-10, 10, 401)
    V = oscillator_field(maps["poly1"], g)
    assert np.all(V.values >= 0) and g.points[np.argmin(V.values)] == 0.0


def test_effective_constant_mass():
    x = np.linspace(-3, 3, 13)
    for a, b in [(0, -0.5), (-0.5, 0), (0.7, 0.1)]:
        np.testing.assert_array_equal(effective_potential(builtin("const"), a, b, x**2, x), x**2)


@pytest.mark.parametrize("name", PROFILES)
def test_effective_unique_ordering(name, rng):
    x = rng.uniform(-5, 5, 200)
    V = np.sin(x)
    assert np.max(np.abs(effective_potential(builtin(name), -0.25, -0.25, V, x) - V)) <= 1e-12


def test_effective_bdd_at_origin():
    assert effective_potential(builtin("poly1"), 0.0, -0.5, None, 0.0) == pytest.approx(-0.25, abs=1e-15)


def test_effective_accepts_field_and_callable():
    g = Grid(-2, 2, 5)
    field = PotentialField(g, g.points**2)
    p = builtin("poly1")
    assert effective_potential(p, -0.25, -0.25, field, 1.0) == pytest.approx(1.0)
    assert effective_potential(p, -0.25, -0.25, lambda x: 3 * x, 1.0) == pytest.approx(3.0)


def test_ordering_functions_against_sympy():
    x = sp.symbols("x")
    m = 1 / (1 + x**2) ** 2
    F1 = sp.lambdify(x, sp.diff(m, x, 2) / m**2)
    F2 = sp.lambdify(x, sp.diff(m, x) ** 2 / m**3)
    for xv in (-1.2, 0.0, 0.4, 3.0):
        f1, f2 = ordering_functions(builtin("soliton"), xv)
        assert f1 == pytest.approx(F1(xv), rel=1e-12, abs=1e-14)
        assert f2 == pytest.approx(F2(xv), rel=1e-12, abs=1e-14)


def test_cruz_examples(maps):
    assert cruz_corrected_potential(builtin("const"), maps["const"], 0.3, +1, 0.0) == pytest.approx(-0.5, abs=1e-15)
    q1 = (math.sqrt(2) + math.asinh(1.0)) / 2
    expected = q1**2 / 2 - 1 / 64 - 1 / 32 - 1 / 2
    value = cruz_corrected_potential(builtin("poly1"), maps["poly1"], 0.0, +1, 1.0)
    assert value == pytest.approx(expected, abs=1e-12)
    assert value == pytest.approx(0.1118403, abs=1e-6)


def test_cruz_hand_derivatives():
    # g = (1+x^2)^(-1/2): g'^2 = 1/8 and g g'' = 1/8 at x = 1
    second, third = cruz_terms(builtin("poly1"), 0.0, 1.0)
    assert second == pytest.approx(1 / 64, abs=1e-15)
    assert third == pytest.approx(1 / 32, abs=1e-15)


@pytest.mark.parametrize("name", PROFILES)
def test_cruz_unique_ordering(name, maps):
    x = np.linspace(-4, 4, 81)
    q = maps[name].forward(x)
    for sign in (+1, -1):
        v = cruz_corrected_potential(builtin(name), maps[name], -0.25, sign, x)
        np.testing.assert_array_equal(v, q**2 / 2 - sign * 0.5)


@given(st.floats(-2, 2), st.floats(-5, 5))
@settings(max_examples=50, deadline=None)
def test_cruz_partner_structure(a, x):
    p = builtin("soliton")
    pm = PctMap(p)
    _, third = cruz_terms(p, a, x)
    plus = cruz_corrected_potential(p, pm, a, +1, x)
    minus = cruz_corrected_potential(p, pm, a, -1, x)
    assert plus - minus == pytest.approx(-2 * third - 1, abs=1e-12)


@pytest.mark.parametrize(
    "a, b, expected",
    [(-0.25, -0.25, (0.0, 0.0)), (0.0, -0.5, (-1.0, -7 / 16)), (-0.5, 0.0, (1.0, 5 / 16))],
)
def test_uniqueness_examples(a, b, expected):
    assert uniqueness_conditions(a, b) == pytest.approx(expected, abs=1e-15)


@given(st.floats(-10, 10))
@settings(max_examples=100)
def test_uniqueness_on_constraint_line(a):
    # along b = -1/2 - a the second residual factors as -(4a+1)(4a+7)/16
    c1, c2 = uniqueness_conditions(a, -0.5 - a)
    assert c1 == pytest.approx(-(4 * a + 1), abs=1e-12)
    assert c2 == pytest.approx(-(4 * a + 1) * (4 * a + 7) / 16, abs=1e-12 * (1 + a * a))


def test_simultaneous_root_is_unique():
    a, b = sp.symbols("a b")
    c1 = 1 + 4 * b
    c2 = sp.Rational(9, 16) + a * (a + 2 * b + 1) + 2 * b
    assert sp.solve([c1, c2], [a, b], dict=True) == [{a: -sp.Rational(1, 4), b: -sp.Rational(1, 4)}]
