import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from bilinear_bessel import (Constant, DomainError, Indicator, PotentialParams, PowerLog,
                             QuadratureError, QuadratureSpec, SmoothBump, Translate,
                             bilinear_bessel, bilinear_bessel_grid, bilinear_bessel_many,
                             bilinear_riesz, linear_bessel)
from bilinear_bessel.kernel import annulus_mass, riesz_constant
from bilinear_bessel.operator import batch_to_csv, dyadic_piece, dyadic_weight, shell_sum

BUMP = SmoothBump(0.5, 1.0)
OFF = Translate(SmoothBump(0.25, 0.5), (0.25,))


class TestClosedForms:
    @pytest.mark.parametrize("n,s", [(1, 0.5), (2, 1.0), (3, 2.0)])
    def test_constant_pair_gives_kernel_mass(self, n, s):
        p = PotentialParams(n, s)
        spec = QuadratureSpec(outer_radius=20.0)
        got = bilinear_bessel(p, Constant(1.0), Constant(1.0), np.zeros(n), spec).value
        assert got == pytest.approx(annulus_mass(p, 0.0, 20.0), rel=1e-7)
        assert got == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("n,s", [(1, 0.5), (1, 0.2), (3, 1.5)])
    def test_unit_balls_at_origin(self, n, s):
        # |x - y| < 1 and |y| < 1 at x = 0 leave the unit ball
        p = PotentialParams(n, s)
        got = bilinear_bessel(p, Indicator(), Indicator(), np.zeros(n)).value
        assert got == pytest.approx(annulus_mass(p, 0.0, 1.0), rel=1e-7)

    @pytest.mark.parametrize("s", [0.2, 0.5, 0.8])
    @pytest.mark.parametrize("x", [0.0, 0.3, -0.7, 0.95])
    def test_riesz_of_indicators(self, s, x):
        p = PotentialParams(1, s)
        got = bilinear_riesz(p, Indicator(), Indicator(), x).value
        want = oracles.riesz_indicator_pair_1d(x, s, riesz_constant(p))
        assert got == pytest.approx(want, rel=1e-8)

    def test_riesz_vanishes_off_overlap(self):
        p = PotentialParams(1, 0.5)
        assert bilinear_riesz(p, Indicator(), Indicator(), 1.5).value == 0.0

    def test_bessel_below_riesz(self, p1):
        for x in (0.0, 0.4):
            b = bilinear_bessel(p1, BUMP, BUMP, x).value
            r = bilinear_riesz(p1, BUMP, BUMP, x).value
            assert 0 < b < r

    def test_linear_potential(self):
        p = PotentialParams(3, 2.0)
        assert linear_bessel(p, Indicator(), np.zeros(3)).value == pytest.approx(
            annulus_mass(p, 0.0, 1.0), rel=1e-7)
        assert linear_bessel(p, Constant(1.0), np.zeros(3)).value == pytest.approx(1.0, abs=1e-6)


class TestStructure:
    @given(st.floats(-1.2, 1.2))
    def test_symmetric_in_the_pair(self, x):
        p = PotentialParams(1, 0.5)
        a = bilinear_bessel(p, BUMP, OFF, x).value
        b = bilinear_bessel(p, OFF, BUMP, x).value
        assert a == pytest.approx(b, rel=1e-9, abs=1e-15)

    @given(st.floats(-1.0, 1.0), st.floats(-3.0, 3.0))
    def test_translation_covariance(self, x, a):
        p = PotentialParams(1, 0.5)
        moved = bilinear_bessel(p, Translate(BUMP, (a,)), Translate(OFF, (a,)), x + a).value
        assert moved == pytest.approx(bilinear_bessel(p, BUMP, OFF, x).value,
                                      rel=1e-8, abs=1e-15)

    @given(st.floats(0.1, 3.0))
    def test_bilinear_in_each_argument(self, c):
        from bilinear_bessel import Scaled
        p = PotentialParams(1, 0.5)
        base = bilinear_bessel(p, BUMP, OFF, 0.2).value
        assert bilinear_bessel(p, Scaled(BUMP, c), OFF, 0.2).value == pytest.approx(c * base,
                                                                                   rel=1e-12)

    def test_two_dimensional_rotation(self):
        p = PotentialParams(2, 1.0)
        f = Translate(SmoothBump(0.2, 0.6), (0.3, 0.0))
        g = Translate(SmoothBump(0.2, 0.6), (0.0, 0.3))
        a = bilinear_bessel(p, f, g, np.array([0.1, 0.2])).value
        fr = Translate(SmoothBump(0.2, 0.6), (0.0, 0.3))
        gr = Translate(SmoothBump(0.2, 0.6), (-0.3, 0.0))
        b = bilinear_bessel(p, fr, gr, np.array([-0.2, 0.1])).value
        assert a == pytest.approx(b, rel=1e-5)

    def test_many_matches_single(self, p1):
        pts = np.array([-0.5, 0.0, 0.5])
        many = bilinear_bessel_many(p1, BUMP, OFF, pts)
        assert [r.value for r in many] == [bilinear_bessel(p1, BUMP, OFF, x).value for x in pts]
        lines = batch_to_csv(pts, many).splitlines()
        assert lines[0] == "x,value,diverged,cutoff_used" and len(lines) == 4


class TestGrid:
    def test_grid_matches_pointwise(self, p1):
        g = bilinear_bessel_grid(p1, BUMP, OFF, -1.5, 1.5, 1200)
        xs = g.axis()
        for i in (100, 500, 600, 777, 1000):
            want = bilinear_bessel(p1, BUMP, OFF, xs[i]).value
            assert g.samples[i] == pytest.approx(want, rel=5e-3, abs=1e-6)

    def test_disjoint_supports_give_zero(self, p1):
        far = Translate(BUMP, (100.0,))
        g = bilinear_bessel_grid(p1, far, Translate(BUMP, (-100.0,)), 10.0, 11.0, 10,
                                 QuadratureSpec(outer_radius=5.0))
        assert not np.any(g.samples)

    def test_grid_rejects_unbounded(self, p1):
        with pytest.raises(DomainError):
            bilinear_bessel_grid(p1, Constant(1.0), BUMP, -1, 1, 10)
        with pytest.raises(DomainError):
            bilinear_bessel_grid(PotentialParams(2, 1.0), BUMP, BUMP, -1, 1, 10)


class TestDyadic:
    def test_weights(self, p1):
        assert dyadic_weight(3, p1) == pytest.approx(2 ** 1.5)
        assert dyadic_weight(-2, p1) == pytest.approx(math.exp(-1.0))

    @pytest.mark.parametrize("k", [0, 1, 4, 10])
    def test_piece_is_ball_measure(self, p1, k):
        assert dyadic_piece(p1, k, Indicator(), Indicator(), 0.0) == pytest.approx(
            2.0 * 2.0 ** -k, rel=1e-10)

    def test_shell_sum_brackets_potential(self, p1):
        exact = bilinear_bessel(p1, BUMP, BUMP, 0.1).value
        upper = shell_sum(p1, BUMP, BUMP, 0.1, mode="max")
        mid = shell_sum(p1, BUMP, BUMP, 0.1)
        assert upper >= exact
        assert mid == pytest.approx(exact, rel=0.25)


class TestSingularities:
    def test_stacked_origin_singularity_flagged(self, p1):
        f = PowerLog(0.5, 0.0)
        res = bilinear_bessel(p1, f, f, 0.0)
        assert res.diverged and res.cutoff_used > 0

    def test_stacked_but_log_integrable(self, p1):
        # exponents sum to n and the log factors give L^-2
        f = PowerLog(0.25, 1.0)
        res = bilinear_bessel(p1, f, f, 0.0)
        assert not res.diverged and math.isfinite(res.value)

    def test_unstacked_singularity_is_finite(self, p1):
        res = bilinear_bessel(p1, PowerLog(0.5, 0.0), BUMP, 0.3)
        assert not res.diverged and res.value > 0

    def test_coincident_singularities_rejected(self, p1):
        f = Translate(PowerLog(0.6, 0.0), (-1.0,))
        g = Translate(PowerLog(0.6, 0.0), (1.0,))
        with pytest.raises(QuadratureError):
            bilinear_bessel(p1, f, g, 0.0)

    def test_inner_cutoff_excises_ball(self, p1):
        full = bilinear_bessel(p1, Indicator(), Indicator(), 0.0).value
        cut = bilinear_bessel(p1, Indicator(), Indicator(), 0.0,
                              QuadratureSpec(inner_cutoff=0.1)).value
        assert full - cut == pytest.approx(annulus_mass(p1, 0.0, 0.1), rel=1e-7)

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(inner_cutoff=2.0, outer_radius=1.0)
        with pytest.raises(DomainError):
            QuadratureSpec(radial_nodes=8)


SCRIPT = """
import json
from bilinear_bessel import PotentialParams, SmoothBump, Translate
from bilinear_bessel import bilinear_bessel_grid, eval_bessel_kernel
from bilinear_bessel import _kernels
p = PotentialParams(1, 0.5)
g = bilinear_bessel_grid(p, SmoothBump(0.5, 1.0), Translate(SmoothBump(0.25, 0.5), (0.25,)),
                         -1.5, 1.5, 300)
k = eval_bessel_kernel(p, [1e-6, 0.1, 1.0, 5.0])
print(json.dumps({"backend": _kernels.BACKEND, "grid": g.samples.tolist(), "kernel": list(k)}))
"""


def run_backend(name):
    env = dict(os.environ, BILINEAR_BESSEL_BACKEND=name)
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, check=True,
                         capture_output=True, text=True)
    return json.loads(out.stdout)


class TestBackends:
    def test_numpy_and_compiled_agree(self):
        a, b = run_backend("numpy"), run_backend("numba")
        assert a["backend"] == "numpy"
        np.testing.assert_allclose(a["grid"], b["grid"], rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(a["kernel"], b["kernel"], rtol=1e-12)
