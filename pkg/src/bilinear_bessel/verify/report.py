"""Experiment report record, least-squares fits and serialization."""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import FitFailureError


@dataclass
class Fit:
    slope: float
    intercept: float
    r_squared: float


def fit_line(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or not np.all(np.isfinite(y)):
        raise FitFailureError("need at least two finite points")
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    ss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float(resid @ resid) / ss if ss > 0 else 1.0
    return Fit(float(slope), float(icpt), r2)


def fit_power_law(x, y):
    """OLS on (log x, log y)."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise FitFailureError("power-law fit needs positive values")
    return fit_line(np.log(x), np.log(y))


def slope_tolerance(expected, rel=0.05, absolute=0.05):
    """Relative tolerance, or an absolute one when the expected slope is zero."""
    return absolute if expected == 0 else rel * abs(expected)


@dataclass
class ExperimentReport:
    """Outcome of one experiment.

    When ``expected_slope`` is finite the slope and R^2 checks are part of
    ``checks``; the verdict is the conjunction of all checks.
    """

    experiment_id: str
    parameter_sequence: list
    measured: list
    fit_slope: float = math.nan
    fit_intercept: float = math.nan
    r_squared: float = math.nan
    expected_slope: float = math.nan
    tolerance: float = math.nan
    checks: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def verdict(self):
        return "pass" if self.checks and all(self.checks.values()) else "fail"

    @property
    def passed(self):
        return self.verdict == "pass"

    def failed_checks(self):
        return [k for k, v in self.checks.items() if not v]

    def to_record(self):
        return _clean({
            "experiment_id": self.experiment_id,
            "parameter_sequence": self.parameter_sequence,
            "measured": self.measured,
            "fit_slope": self.fit_slope,
            "fit_intercept": self.fit_intercept,
            "r_squared": self.r_squared,
            "expected_slope": self.expected_slope,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "checks": self.checks,
            "extra": self.extra,
            "config": self.config,
        })


def _clean(v):
    """Convert to JSON-safe values; non-finite floats become strings."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_clean(x) for x in v.tolist()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return v


def reports_to_json(reports):
    body = {"reports": [r.to_record() for r in reports]}
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def reports_to_csv(reports):
    """Summary table followed by one block of (parameter, measured) rows per report."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["experiment_id", "verdict", "fit_slope", "expected_slope", "tolerance",
                "r_squared", "failed_checks"])
    for r in reports:
        rec = r.to_record()
        w.writerow([rec["experiment_id"], rec["verdict"], rec["fit_slope"],
                    rec["expected_slope"], rec["tolerance"], rec["r_squared"],
                    ";".join(r.failed_checks())])
    for r in reports:
        rec = r.to_record()
        out.write("\n")
        w.writerow(["experiment_id", "index", "parameter", "measured"])
        for i, (p, m) in enumerate(zip(rec["parameter_sequence"], rec["measured"])):
            w.writerow([rec["experiment_id"], i, _cell(p), _cell(m)])
    return out.getvalue()


def _cell(v):
    return json.dumps(v) if isinstance(v, (list, dict)) else v
