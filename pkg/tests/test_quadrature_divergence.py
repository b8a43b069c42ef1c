import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bilinear_bessel.divergence import (classify_truncations, halving_cutoffs,
                                        increment_ratios)
from bilinear_bessel.errors import InconclusiveDivergenceError
from bilinear_bessel.quadrature import ORDER, gauss_on_panels, graded_edges, graded_rule


class TestGaussPanels:
    @pytest.mark.parametrize("deg", range(0, 2 * ORDER))
    def test_exact_on_polynomials(self, deg):
        x, w = gauss_on_panels([-1.0, 0.3, 2.0])
        want = (2.0 ** (deg + 1) - (-1.0) ** (deg + 1)) / (deg + 1)
        assert np.sum(w * x ** deg) == pytest.approx(want, rel=1e-13, abs=1e-13)

    def test_degenerate_edges(self):
        x, w = gauss_on_panels([1.0])
        assert x.size == 0 and w.size == 0
        x, w = gauss_on_panels([0.0, 0.0, 1.0])
        assert w.sum() == pytest.approx(1.0)

    @given(st.floats(-50, 50), st.floats(1e-3, 100), st.booleans(), st.booleans(),
           st.floats(0.05, 5.0))
    def test_edges_partition_interval(self, a, length, left, right, width):
        e = graded_edges(a, a + length, left, right, max_width=width, split=1.0)
        assert e[0] == a and e[-1] == pytest.approx(a + length, rel=1e-15, abs=1e-15)
        assert np.all(np.diff(e) > 0)
        if not (left or right):
            assert np.max(np.diff(e)) <= width * (1 + 1e-12)

    def test_empty_interval(self):
        assert graded_edges(1.0, 1.0).tolist() == [1.0]


class TestGradedRule:
    @pytest.mark.parametrize("c", [0.25, 0.5, 0.75, 0.9])
    def test_algebraic_endpoint_singularity(self, c):
        x, w = graded_rule(0.0, 1.0, left=True, split=1.0)
        # only the first panel [0, 1e-14], of mass 1e-14^(1-c)/(1-c), is underresolved
        tol = 1e-14 ** (1 - c) / (1 - c)
        assert np.sum(w * x ** -c) == pytest.approx(1 / (1 - c), abs=tol)

    def test_log_singularity_right(self):
        x, w = graded_rule(0.0, 1.0, right=True, split=0.5)
        assert np.sum(w * np.log1p(-x)) == pytest.approx(-1.0, abs=1e-12)

    def test_both_ends(self):
        x, w = graded_rule(0.0, 1.0, left=True, right=True)
        got = np.sum(w * (x * (1 - x)) ** -0.5)
        assert got == pytest.approx(math.pi, abs=1e-6)


def power_truncation(c):
    """int_eps^1 x^(-c) dx."""
    if abs(c - 1) < 1e-9:
        return lambda e: -np.log(e)
    return lambda e: -np.expm1((1 - c) * np.log(e)) / (1 - c)


def log_truncation(b):
    """int_eps^1 dx / (x L^b) with L = log(e/x)."""
    def f(e):
        L = np.log(np.e / np.asarray(e))
        return np.log(L) if b == 1 else (L ** (1 - b) - 1) / (1 - b)
    return f


class TestClassifier:
    def test_cutoffs_halve(self):
        e = halving_cutoffs(0.5, 1e-3)
        np.testing.assert_allclose(e[1:] / e[:-1], 0.5)
        assert e[-1] >= 1e-3 > e[-1] / 2

    def test_increment_ratios(self):
        np.testing.assert_allclose(increment_ratios([0, 1, 1.5, 1.75]), [0.5, 0.5])
        assert increment_ratios([0, 0, 1])[0] == np.inf

    @given(st.floats(0.0, 0.8))
    def test_integrable_power_converges(self, c):
        assert classify_truncations(power_truncation(c)).converged

    @given(st.floats(1.0, 3.0))
    def test_nonintegrable_power_diverges(self, c):
        assert classify_truncations(power_truncation(c)).diverged

    @pytest.mark.parametrize("b,status", [(0.5, "diverged"), (1.0, "diverged"),
                                          (1.5, "converged"), (2.0, "converged")])
    def test_log_scale(self, b, status):
        chk = classify_truncations(log_truncation(b), start=2.0 ** -4, floor=1e-300,
                                   max_halvings=2000)
        assert chk.status == status
        assert chk.log_exponent == pytest.approx(b, abs=0.05)

    def test_exact_limit_reports_converged(self):
        assert classify_truncations(lambda e: np.full(np.shape(e), 3.0)).converged

    def test_infinite_value_diverges(self):
        chk = classify_truncations(lambda e: np.where(np.asarray(e) < 1e-6, np.inf, 1.0))
        assert chk.diverged

    def test_straddling_ratios_inconclusive(self):
        def wobble(e):
            k = np.arange(np.size(e))
            return np.cumsum(np.where(k % 2 == 0, 1.0, 0.5))
        assert classify_truncations(wobble).status == "inconclusive"
        with pytest.raises(InconclusiveDivergenceError):
            classify_truncations(wobble, strict=True)
