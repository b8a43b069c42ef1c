import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bilinear_bessel import FitFailureError
from bilinear_bessel.verify.report import (ExperimentReport, fit_line, fit_power_law,
                                           reports_to_csv, reports_to_json, slope_tolerance)


def sample_report(ok=True):
    return ExperimentReport("demo", [1.0, 2.0, math.inf], [0.5, np.float64(0.25), math.nan],
                            fit_slope=-1.0, expected_slope=-1.0, tolerance=0.05,
                            checks={"slope": True, "positive": ok},
                            extra={"arr": np.arange(3), "flag": np.bool_(True)},
                            config={"n": 1})


class TestFits:
    @given(st.floats(0.1, 5), st.booleans(), st.floats(-5, 5))
    def test_exact_line(self, a, neg, b):
        # a flat line has no variance to explain, so R^2 is only tested off zero slope
        a = -a if neg else a
        x = np.linspace(0, 3, 7)
        fit = fit_line(x, a * x + b)
        assert fit.slope == pytest.approx(a, abs=1e-9)
        assert fit.intercept == pytest.approx(b, abs=1e-9)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-9)

    def test_power_law(self):
        x = np.array([1.0, 2.0, 4.0, 8.0])
        fit = fit_power_law(x, 3.0 * x ** -0.5)
        assert fit.slope == pytest.approx(-0.5) and math.exp(fit.intercept) == pytest.approx(3)

    def test_failures(self):
        with pytest.raises(FitFailureError):
            fit_line([1.0], [1.0])
        with pytest.raises(FitFailureError):
            fit_line([1.0, 2.0], [1.0, math.inf])
        with pytest.raises(FitFailureError):
            fit_power_law([1.0, 2.0], [1.0, 0.0])

    def test_tolerance(self):
        assert slope_tolerance(2.0) == pytest.approx(0.1)
        assert slope_tolerance(0.0) == 0.05


class TestReport:
    def test_verdict_is_conjunction(self):
        assert sample_report().passed
        bad = sample_report(ok=False)
        assert bad.verdict == "fail" and bad.failed_checks() == ["positive"]

    def test_no_checks_is_fail(self):
        assert ExperimentReport("x", [], []).verdict == "fail"

    def test_record_is_json_safe(self):
        rec = sample_report().to_record()
        text = json.dumps(rec, allow_nan=False)
        back = json.loads(text)
        assert back["parameter_sequence"][2] == "inf" and back["measured"][2] == "nan"
        assert back["extra"]["arr"] == [0, 1, 2] and back["extra"]["flag"] is True

    def test_json_is_deterministic(self):
        a = reports_to_json([sample_report(), sample_report(False)])
        assert a == reports_to_json([sample_report(), sample_report(False)])
        assert a.endswith("\n") and json.loads(a)["reports"][1]["verdict"] == "fail"

    def test_csv_layout(self):
        lines = reports_to_csv([sample_report(False)]).splitlines()
        assert lines[0].startswith("experiment_id,verdict,fit_slope")
        assert lines[1].startswith("demo,fail,-1.0,-1.0,0.05") and lines[1].endswith("positive")
        assert lines[3] == "experiment_id,index,parameter,measured"
        assert lines[4:] == ["demo,0,1.0,0.5", "demo,1,2.0,0.25", "demo,2,inf,nan"]
