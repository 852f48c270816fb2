import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from depthdegen.core import DomainError
from depthdegen.jfunctions import j11_closed, j_monte_carlo, j_numeric

PI = np.pi


@pytest.mark.parametrize("a,b,theta,expected", [
    (1, 1, 0.0, 0.5),
    (1, 1, PI / 2, 1 / (2 * PI)),
    (1, 1, PI, 0.0),
    (2, 2, 0.0, 1.5),
    (0, 0, 1.3, 1.0),
    (2, 0, 2.0, 0.5),
])
def test_known_values(a, b, theta, expected):
    assert j_numeric(a, b, theta) == pytest.approx(expected, abs=1e-12)


def test_closed_form_values():
    assert j11_closed(0.0) == 0.5
    assert j11_closed(PI / 2) == pytest.approx(1 / (2 * PI), abs=1e-16)


@pytest.mark.invariant
def test_closed_form_on_grid():
    grid = np.linspace(0, PI, 50)
    err = [abs(j11_closed(t) - j_numeric(1, 1, t)) for t in grid]
    assert max(err) <= 1e-8


@pytest.mark.parametrize("a,b,theta", [(1, 3, 1.0), (2, 2, 2.0), (4, 4, 0.5), (3, 5, 2.5), (1, 7, 0.2)])
def test_against_adaptive_cubature(a, b, theta):
    c, s = np.cos(theta), np.sin(theta)

    def f(z, g):
        return max(g, 0) ** a * max(c * g + s * z, 0) ** b * np.exp(-(g * g + z * z) / 2) / (2 * PI)

    ref, _ = integrate.dblquad(f, 0, 12, -12, 12, epsabs=1e-12)
    assert j_numeric(a, b, theta) == pytest.approx(ref, abs=1e-8)


def test_budget():
    with pytest.raises(DomainError):
        j_numeric(5, 4, 1.0)
    with pytest.raises(DomainError):
        j_numeric(-1, 1, 1.0)
    with pytest.raises(DomainError):
        j_numeric(1, 1, 4.0)


@pytest.mark.invariant
def test_strictly_decreasing():
    vals = [j_numeric(1, 1, t) for t in np.linspace(0, PI, 200)]
    assert np.all(np.diff(vals) < 0)


pairs = st.tuples(st.integers(0, 4), st.integers(0, 4))


@pytest.mark.invariant
@given(pairs, st.floats(0, PI))
def test_symmetry(ab, theta):
    a, b = ab
    assert j_numeric(a, b, theta) == pytest.approx(j_numeric(b, a, theta), rel=1e-12, abs=1e-14)


@pytest.mark.invariant
@given(pairs, st.floats(0, PI))
def test_cauchy_schwarz(ab, theta):
    a, b = ab
    lhs = j_numeric(a, b, theta) ** 2
    assert lhs <= j_numeric(a, a, 0.0) * j_numeric(b, b, 0.0) * (1 + 1e-12)


@pytest.mark.invariant
@pytest.mark.slow
@pytest.mark.parametrize("theta", [0.1, 1.0, 2.0])
def test_monte_carlo_cross_check(theta):
    rng = np.random.default_rng(20240101)
    for a, b in [(1, 1), (2, 2), (1, 3)]:
        est, se = j_monte_carlo(a, b, theta, 10**7, rng)
        assert abs(est - j_numeric(a, b, theta)) <= 4 * se
