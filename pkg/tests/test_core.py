import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depthdegen import core
from depthdegen.core import (
    DomainError,
    finite_step_full,
    finite_step_simple,
    infinite_step,
    mu,
    rho,
    sigma_sq,
    theta_to_x,
    x_to_theta,
)

PI = np.pi
half_angles = st.floats(min_value=1e-6, max_value=PI / 2)
widths = st.integers(min_value=2, max_value=100_000)


def mu_direct(t, n):
    # term-by-term transcription, used as an independent check of mu
    r = np.log((n + 5) / (n - 1)) - 10 * n / (n + 5) ** 2 + 6 * n / (n - 1) ** 2
    return (np.log(np.sin(t) ** 2) - 2 / (3 * PI) * t - r - 8 * t / (15 * PI * n)
            - (2 / (9 * PI**2) - 68 / (45 * PI**2 * n)) * t**2)


class TestRho:
    def test_small_width(self):
        assert rho(3) == pytest.approx(np.log(4) - 30 / 64 + 18 / 4, rel=1e-15)
        assert rho(3) == pytest.approx(5.417544, abs=1e-6)

    def test_width_256(self):
        assert rho(256) == pytest.approx(0.0092984, abs=1e-7)

    def test_asymptote(self):
        n = np.array([10**3, 10**4, 10**5, 10**6])
        err = np.abs(rho(n) - 2 / n)
        assert np.all(err * n**2 < 101)
        assert n[-1] * rho(n[-1]) == pytest.approx(2, abs=1e-3)

    @pytest.mark.parametrize("n", [1, 0, -3, 1.5])
    def test_pole_rejected(self, n):
        with pytest.raises(DomainError, match="pole"):
            rho(n)

    def test_vectorised(self):
        assert rho(np.array([3, 256])).shape == (2,)


class TestMu:
    def test_frozen_value(self):
        assert mu(0.1, 256) == pytest.approx(-4.639309140136068, rel=1e-14)
        assert mu(0.1, 256) == pytest.approx(mu_direct(0.1, 256), rel=1e-14)

    def test_zero_angle_absorbing(self):
        assert mu(0.0, 64) == -np.inf
        assert mu(1e-300, 64) < -1000

    def test_large_width_limit(self):
        t = 0.3
        n = 1e9
        lhs = mu(t, n) - np.log(np.sin(t) ** 2) + rho(n)
        assert lhs == pytest.approx(-2 / (3 * PI) * t - 2 / (9 * PI**2) * t**2, abs=1e-8)

    def test_rejects_obtuse(self):
        with pytest.raises(DomainError):
            mu(PI / 2 + 1e-9, 10)

    @given(half_angles, widths)
    def test_matches_direct(self, t, n):
        assert mu(t, n) == pytest.approx(mu_direct(t, n), rel=1e-12, abs=1e-12)


class TestSigmaSq:
    @pytest.mark.parametrize("n", [2, 64, 256, 4096])
    def test_zero_angle(self, n):
        assert sigma_sq(0.0, n) == 8 / n

    def test_below_leading_term(self):
        assert 0 < sigma_sq(0.1, 256) < 8 / 256
        assert sigma_sq(0.1, 256) == pytest.approx(0.030325195566160347, rel=1e-14)

    def test_halves_with_width(self):
        for n in (64, 128, 256):
            assert sigma_sq(0.1, 2 * n) < sigma_sq(0.1, n)

    def test_clamped_at_zero(self):
        assert sigma_sq(PI / 2, 16) == 0.0
        assert sigma_sq(np.array([0.8, 0.85]), 16)[1] == 0.0

    @pytest.mark.invariant
    @given(st.floats(0, 0.5), st.integers(16, 4095))
    def test_strictly_decreasing_in_width(self, t, n):
        assert sigma_sq(t, n + 1) < sigma_sq(t, n)


class TestCoordinates:
    @pytest.mark.invariant
    @given(st.floats(min_value=1e-6, max_value=PI / 2))
    def test_round_trip(self, t):
        assert x_to_theta(theta_to_x(t)) == pytest.approx(t, rel=1e-12)

    def test_round_trip_near_right_angle(self):
        t = np.nextafter(PI / 2, 0) - 1e-9
        assert x_to_theta(theta_to_x(t)) == pytest.approx(t, rel=1e-15)

    def test_literal_arcsin_form(self):
        t = np.linspace(0.01, 1.2, 50)
        assert np.allclose(np.arcsin(np.exp(theta_to_x(t) / 2)), t, rtol=1e-12)

    def test_absorbing(self):
        assert x_to_theta(-np.inf) == 0.0
        assert theta_to_x(0.0) == -np.inf
        assert x_to_theta(-1500.0) == 0.0

    def test_rejects_positive_x(self):
        with pytest.raises(DomainError):
            x_to_theta(0.1)


class TestSteps:
    def test_absorbing(self):
        assert finite_step_simple(-np.inf, 256) == -np.inf
        assert finite_step_full(-np.inf, 256) == -np.inf

    def test_simple_composition(self):
        x = np.log(np.sin(0.1) ** 2)
        expected = x - 2 / (3 * PI) * 0.1 - rho(256)
        assert finite_step_simple(x, 256) == pytest.approx(expected, abs=1e-14)

    def test_full_from_orthogonal(self):
        assert finite_step_full(0.0, 256) == mu(PI / 2, 256)

    def test_simple_vs_full_leading_term(self):
        # full - simple = -8 t/(15 pi n) - (2/(9 pi^2) - 68/(45 pi^2 n)) t^2 exactly
        n = 256
        thetas = np.array([0.2, 0.1, 0.05, 0.025])
        x = theta_to_x(thetas)
        diff = finite_step_full(x, n) - finite_step_simple(x, n)
        assert np.all(np.diff(np.abs(diff)) < 0)
        tiny = 1e-7
        lead = (finite_step_full(theta_to_x(tiny), n) - finite_step_simple(theta_to_x(tiny), n)) / tiny
        assert lead == pytest.approx(-8 / (15 * PI * n), rel=1e-4)
        remainder = diff + 8 * thetas / (15 * PI * n)
        ratios = remainder[:-1] / remainder[1:]
        assert np.allclose(ratios, 4.0, rtol=1e-6)

    def test_infinite_examples(self):
        assert infinite_step(0.0) == 0.0
        assert infinite_step(PI) == pytest.approx(PI / 2, abs=1e-15)
        assert infinite_step(PI / 2) == pytest.approx(np.arccos(1 / PI), rel=1e-14)
        assert infinite_step(PI / 2) == pytest.approx(1.246850, abs=1e-6)

    def test_infinite_small_angle_precision(self):
        # series: theta' = theta - theta^2/(3 pi) + O(theta^3)
        t = 1e-7
        assert infinite_step(t) == pytest.approx(t - t**2 / (3 * PI), rel=1e-12)

    @given(st.floats(min_value=1e-9, max_value=PI))
    def test_infinite_matches_closed_form(self, t):
        ref = np.arccos((np.sin(t) + (PI - t) * np.cos(t)) / PI)
        # arccos near 1 only carries ~sqrt(eps) absolute accuracy
        assert infinite_step(t) == pytest.approx(ref, abs=5e-8)
        assert 0 <= infinite_step(t) <= PI / 2


class TestInvariants:
    @pytest.mark.invariant
    @given(st.floats(min_value=1e-9, max_value=PI / 2))
    def test_contraction(self, t):
        assert infinite_step(t) < t

    @pytest.mark.invariant
    @given(st.floats(min_value=1e-3, max_value=PI))
    def test_iteration_converges_monotonically(self, t):
        seq = [t]
        for _ in range(200):
            seq.append(infinite_step(seq[-1]))
        assert np.all(np.diff(seq[1:]) < 0)
        assert seq[-1] < 0.05

    @pytest.mark.invariant
    @given(half_angles, widths)
    @settings(max_examples=300)
    def test_finite_below_infinite(self, t, n):
        assert finite_step_full(theta_to_x(t), n) < theta_to_x(infinite_step(t))

    @pytest.mark.invariant
    def test_simple_full_agree_as_angle_vanishes(self):
        n = 64
        t = np.geomspace(1e-8, 1e-2, 7)
        diff = np.abs(finite_step_full(theta_to_x(t), n) - finite_step_simple(theta_to_x(t), n))
        assert np.all(np.diff(diff) > 0)
        assert diff[0] < 1e-10


def test_pure_scalar_types():
    assert isinstance(rho(10), float)
    assert isinstance(core.mu(0.2, 10), float)
