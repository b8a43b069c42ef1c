import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

import oracles
from bilinear_bessel import (Constant, Dilate, DomainError, Indicator, Mollifier, PowerLog,
                             Scaled, SmoothBump, Translate, evaluate, from_record, lp_norm,
                             sup_norm, to_record)
from bilinear_bessel.funcfam import is_radial
from bilinear_bessel.kernel import unit_ball_volume

powerlog_st = st.builds(PowerLog, st.floats(0.0, 0.9), st.floats(-1.0, 2.0),
                        st.floats(0.1, 1.0))
bump_st = st.floats(0.05, 0.9).flatmap(
    lambda a: st.builds(SmoothBump, st.just(a), st.floats(a + 0.05, 2.0)))
simple_st = st.one_of(powerlog_st, bump_st,
                      st.builds(Indicator, st.just((0.0,)), st.floats(0.1, 3.0)),
                      st.builds(Mollifier, st.floats(1e-4, 0.12)))


class TestProfiles:
    def test_indicator_is_open_ball(self):
        f = Indicator((0.0,), 1.0)
        np.testing.assert_array_equal(f.profile(np.array([0.0, 0.999, 1.0, 2.0]), 1),
                                      [1, 1, 0, 0])

    def test_powerlog_vanishes_at_origin_and_outside(self):
        f = PowerLog(0.5, 1.0, 0.5)
        assert f.profile(np.array([0.0]), 1)[0] == 0.0
        assert f.profile(np.array([0.5, 0.7]), 1).tolist() == [0.0, 0.0]

    def test_powerlog_formula(self):
        f = PowerLog(0.3, 0.7)
        r = np.array([1e-6, 0.1, 0.9])
        np.testing.assert_allclose(f.profile(r, 1), r ** -0.3 * np.log(np.e / r) ** -0.7)

    def test_log_profile_below_float_range(self):
        f = PowerLog(0.5, 1.0)
        lr = np.array([-2000.0])
        assert f.log_abs_profile_at_log(lr, 1)[0] == pytest.approx(1000.0 - math.log(2001.0))

    def test_bump_plateau_and_support(self):
        b = SmoothBump(0.5, 1.0)
        np.testing.assert_array_equal(b.profile(np.array([0.0, 0.5, 1.0, 1.5]), 3), [1, 1, 0, 0])

    @given(bump_st, st.floats(0.0, 1.0))
    def test_bump_derivative_matches_difference(self, b, t):
        r = b.inner + t * (b.outer - b.inner)
        h = 1e-6 * (b.outer - b.inner)
        fd = (b.profile(r + h, 1) - b.profile(r - h, 1)) / (2 * h)
        assert b.profile_derivative(r, 1) == pytest.approx(fd, abs=1e-4 / (b.outer - b.inner))

    @given(powerlog_st, st.floats(-30, -0.2))
    def test_log_slope_matches_difference(self, f, lr):
        lr = min(lr, math.log(f.support_radius) - 0.05)
        h = 1e-6
        fd = (f.log_abs_profile_at_log(np.array([lr + h]), 1)[0]
              - f.log_abs_profile_at_log(np.array([lr - h]), 1)[0]) / (2 * h)
        assert f.log_slope_at_log(np.array([lr]), 1)[0] == pytest.approx(fd, abs=1e-6)

    def test_mollifier_width_checked(self):
        for eps in (0.0, 0.125, 0.3):
            with pytest.raises(DomainError):
                Mollifier(eps)

    def test_translate_and_evaluate(self):
        f = Translate(Indicator((0.0,), 0.5), (2.0,))
        np.testing.assert_array_equal(evaluate(f, np.array([2.0, 2.4, 1.0])), [1, 1, 0])
        assert not is_radial(f, 1)
        assert is_radial(Indicator(), 2)

    def test_evaluate_in_three_dimensions(self):
        f = Indicator((0.0, 0.0, 1.0), 1.0)
        pts = np.array([[0.0, 0.0, 1.5], [0.0, 0.0, -0.5]])
        np.testing.assert_array_equal(evaluate(f, pts, 3), [1, 0])

    def test_center_must_fit_dimension(self):
        with pytest.raises(DomainError):
            Indicator((0.0, 1.0)).center_vector(1)


class TestNorms:
    @given(st.floats(0.1, 3.0), st.floats(0.5, 6.0), st.integers(1, 3))
    def test_indicator(self, R, p, n):
        assert lp_norm(Indicator((0.0,), R), p, n) == pytest.approx(
            (unit_ball_volume(n) * R ** n) ** (1 / p), rel=1e-9)

    @given(st.floats(1e-4, 0.12), st.integers(1, 3))
    def test_mollifier_has_unit_mass(self, eps, n):
        assert lp_norm(Mollifier(eps), 1, n) == pytest.approx(1.0, rel=1e-9)

    @pytest.mark.parametrize("a,b,p,rho", [(0.25, 1.0, 2.0, 1.0), (0.5, 1.0, 1.5, 0.5),
                                           (0.0, -1.0, 1.0, 1.0), (0.9, 2.0, 1.0, 0.3)])
    def test_powerlog_against_quadrature(self, a, b, p, rho):
        want = oracles.powerlog_lp_1d(a, b, p, rho) ** (1 / p)
        assert lp_norm(PowerLog(a, b, rho), p, 1) == pytest.approx(want, rel=1e-7)

    @pytest.mark.parametrize("b,p,finite", [(1.0, 2.0, True), (0.5, 2.0, False),
                                            (0.75, 2.0, True), (0.4, 4.0, True),
                                            (0.25, 4.0, False)])
    def test_critical_powerlog_needs_bp_above_one(self, b, p, finite):
        # a p = n: finite exactly when b p > 1
        f = PowerLog(1.0 / p, b)
        assert math.isfinite(lp_norm(f, p, 1)) is finite

    def test_powerlog_three_dimensions(self):
        f = PowerLog(1.0, 0.5)
        # 4 pi int_0^1 r^(2-2) log(e/r)^-1 dr in L = log(e/r)
        want, _ = quad(lambda L: math.exp(1 - L) / L, 1, math.inf)
        assert lp_norm(f, 2, 3) == pytest.approx(math.sqrt(4 * math.pi * want), rel=1e-7)

    def test_bump(self):
        b = SmoothBump(0.5, 1.0)
        taper, _ = quad(lambda r: float(b.profile(r, 1)) ** 3, 0.5, 1.0)
        assert lp_norm(b, 3, 1) == pytest.approx((2 * (0.5 + taper)) ** (1 / 3), rel=1e-9)

    def test_constant(self):
        assert lp_norm(Constant(0.0), 2, 1) == 0.0
        assert lp_norm(Constant(1.0), 2, 1) == math.inf
        assert sup_norm(Constant(2.0), 1) == 2.0

    def test_sup_norm(self):
        assert sup_norm(Mollifier(0.1), 1) == pytest.approx(5.0)
        assert sup_norm(PowerLog(0.1, 1.0), 1) == math.inf

    @given(bump_st, st.floats(1.0, 50.0), st.floats(1.0, 4.0), st.integers(1, 2))
    def test_dilation_preserves_norm(self, b, lam, p, n):
        # lam^(n/p) b(lam x) has the L^p norm of b
        d = Dilate(b, lam, n / p)
        assert lp_norm(d, p, n) == pytest.approx(lp_norm(b, p, n), rel=1e-8)

    @given(simple_st, st.floats(-3, 3), st.floats(1.0, 3.0))
    def test_scaling_and_translation(self, f, c, p):
        base = lp_norm(f, p, 1)
        assert lp_norm(Scaled(f, c), p, 1) == pytest.approx(abs(c) * base, rel=1e-9, abs=1e-300)
        assert lp_norm(Translate(f, (1.7,)), p, 1) == pytest.approx(base, rel=1e-12)


class TestRecords:
    @given(simple_st)
    def test_round_trip(self, f):
        assert from_record(to_record(f)) == f

    def test_nested_round_trip(self):
        f = Translate(Scaled(Dilate(SmoothBump(0.25, 0.5), 4.0, 0.5), 2.0), (1.0,))
        rec = to_record(f)
        assert rec["kind"] == "translate" and rec["base"]["base"]["kind"] == "dilate"
        assert from_record(rec) == f

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            from_record({"kind": "gaussian"})

    def test_bad_fields(self):
        with pytest.raises(DomainError):
            from_record({"kind": "indicator", "width": 2})
