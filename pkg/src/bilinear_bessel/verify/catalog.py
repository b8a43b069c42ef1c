"""Published experiment catalog: default options and a runner per entry.

Every entry calls exactly one ``run_*`` operation. Runners return a list of
reports so that multi-pair checks keep one record per pair.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from ..funcfam import Indicator, Mollifier, PowerLog, SmoothBump, Translate
from ..lorentz import LorentzIndex, lorentz_norm
from ..operator import bilinear_bessel_grid
from .experiments import (run_barycentric, run_critical_divergence,
                          run_half_norm_uniformity, run_interpolation_crossover,
                          run_mollifier_blowup, run_oneil_check,
                          run_region_classification, run_scaling_lower,
                          run_scaling_upper, run_sharpness_endpoint,
                          run_sharpness_interior)
from .regions import ExponentTriple


@dataclass(frozen=True)
class CatalogEntry:
    experiment_id: str
    operation: str
    runner: object
    defaults: dict = field(default_factory=dict)
    validate: object = None


def _inv(x):
    return 0.0 if x == math.inf else 1.0 / x


def _geometric(seq, name):
    seq = np.asarray(seq, dtype=float)
    if seq.ndim != 1 or seq.size < 3 or np.any(seq <= 0):
        raise DomainError(f"{name} needs at least three positive values")
    ratios = seq[1:] / seq[:-1]
    if np.max(np.abs(ratios / ratios[0] - 1)) > 1e-9:
        raise DomainError(f"{name} must be a geometric sequence")


# ---------------------------------------------------------------------------
# validators: cheap checks run before any computation
# ---------------------------------------------------------------------------

def _v_scaling_upper(params, o):
    _geometric(o["R_sequence"], "R_sequence")
    ExponentTriple(o["inv_p"], o["inv_q"], o["inv_r"])


def _v_scaling_lower(params, o):
    _geometric(o["lambda_sequence"], "lambda_sequence")
    if not o["bump_radius"] > 0:
        raise DomainError("bump_radius must be positive")
    if not o["inv_p"] + o["inv_q"] - params.s / params.n > 0:
        raise DomainError("need 1/p + 1/q > s/n for a finite r on the fractional surface")


def _v_critical(params, o):
    ip, iq = _inv(o["p"]), _inv(o["q"])
    if abs(ip + iq - params.s / params.n) > 1e-12:
        raise DomainError("critical line requires 1/p + 1/q = s/n")
    _geometric(o["cutoff_sequence"], "cutoff_sequence")


def _v_sharp_interior(params, o):
    p, q, a = o["p"], o["q"], o["alpha"]
    if not (1 < p < math.inf and 1 < q < math.inf):
        raise DomainError("need 1 < p, q < inf")
    if not 1 / a > 1 / p + 1 / q:
        raise DomainError("need 1/alpha > 1/p + 1/q")
    if not 1 / p + 1 / q > params.s / params.n:
        raise DomainError("need 1/p + 1/q > s/n")


def _v_sharp_endpoint(params, o):
    if o["q_endpoint"] not in (1.0, math.inf):
        raise DomainError("q_endpoint must be 1 or inf")
    if not 1 < o["p"] < params.n / params.s:
        raise DomainError("need 1 < p < n/s")


def _v_mollifier(params, o):
    eps = np.asarray(o["epsilon_sequence"], dtype=float)
    _geometric(eps, "epsilon_sequence")
    if np.any(eps >= 0.125):
        raise DomainError("mollifier widths must lie below 1/8 so the annulus is nonempty")


def _v_interp(params, o):
    if params.n != 1:
        raise DomainError("interpolation crossover uses a one-dimensional grid")
    if not (0 < o["r1"] < o["r2"] and 0 < o["theta"] < 1):
        raise DomainError("need 0 < r1 < r2 and 0 < theta < 1")


def _v_n1(params, o):
    if params.n != 1:
        raise DomainError("experiment is implemented for n = 1")


def _v_bary(params, o):
    if int(o["draws"]) < 1:
        raise DomainError("draws must be positive")


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------

def _r_scaling_upper(params, o):
    t = ExponentTriple(o["inv_p"], o["inv_q"], o["inv_r"])
    return [run_scaling_upper(params, tuple(o["R_sequence"]), t)]


def _r_scaling_lower(params, o):
    t = ExponentTriple(o["inv_p"], o["inv_q"], o["inv_p"] + o["inv_q"] - params.s / params.n)
    return [run_scaling_lower(params, tuple(o["lambda_sequence"]), t,
                              bump_radius=o["bump_radius"])]


def _r_critical(params, o):
    return [run_critical_divergence(params, o["p"], o["q"], o["beta"], o["gamma"],
                                    o["cutoff_sequence"])]


def _r_sharp_interior(params, o):
    return [run_sharpness_interior(params, o["p"], o["q"], o["alpha"])]


def _r_sharp_endpoint(params, o):
    return [run_sharpness_endpoint(params, o["p"], o["q_endpoint"], o["alpha"])]


def _r_mollifier(params, o):
    return [run_mollifier_blowup(params, o["alpha"], o["epsilon_sequence"])]


def interpolation_input(params, cells=1600):
    """Grid potential of a bump pair and the two envelope constants.

    A = ||h||_{r1} and B = ||h||_{r2, inf} bound h* by Chebyshev's inequality
    and by the definition of the weak norm.
    """
    f = SmoothBump(0.5, 1.0)
    g = Translate(SmoothBump(0.25, 0.5), (0.25,))
    return bilinear_bessel_grid(params, f, g, -1.5, 1.5, int(cells))


def _r_interp(params, o):
    h = interpolation_input(params, o["cells"])
    r1, r2 = o["r1"], o["r2"]
    A = float(np.sum(h.measures * np.abs(h.values) ** r1)) ** (1 / r1)
    B = lorentz_norm(h, LorentzIndex(r2, math.inf))
    return [run_interpolation_crossover(A, B, r1, r2, o["theta"], o["alpha"], h)]


def oneil_pairs():
    """Six one-dimensional pairs with exponents (p, q, r, alpha1, alpha2, alpha)."""
    return [
        ("indicator_indicator", Indicator((0.0,), 1.0), Indicator((0.0,), 0.5),
         (4 / 3, 4 / 3, 2.0, 4 / 3, 4 / 3, 2.0)),
        ("bump_bump", SmoothBump(0.5, 1.0), SmoothBump(0.25, 0.75),
         (1.5, 1.5, 3.0, 2.0, 2.0, 1.0)),
        ("powerlog_indicator", PowerLog(0.25, 1.0, 1.0), Indicator((0.0,), 1.0),
         (2.0, 4 / 3, 4.0, 2.0, math.inf, 2.0)),
        ("powerlog_bump", PowerLog(0.3, 0.5, 1.0), SmoothBump(0.5, 1.0),
         (2.0, 1.5, 6.0, 4.0, 4.0, 2.0)),
        ("mollifier_indicator", Mollifier(0.05), Indicator((0.0,), 2.0),
         (1.25, 1.25, 5 / 3, 1.25, 1.25, math.inf)),
        ("translated_bump_powerlog", Translate(SmoothBump(0.5, 1.0), (1.0,)),
         PowerLog(0.2, 1.0, 0.5), (3.0, 1.2, 6.0, 3.0, 1.2, 6.0)),
    ]


def _r_oneil(params, o):
    out = []
    for label, f, g, ex in oneil_pairs():
        out.append(run_oneil_check(f, g, *ex, cells=int(o["cells"]), label=label))
    return out


def _r_half(params, o):
    return [run_half_norm_uniformity(params)]


def _r_bary(params, o):
    return [run_barycentric(params, int(o["draws"]), int(o["seed"]))]


def _r_regions(params, o):
    return [run_region_classification(params, int(o["points"]))]


_CUTS = tuple(8.0 ** -np.arange(1, 13))

CATALOG = {e.experiment_id: e for e in [
    CatalogEntry("scaling_upper", "run_scaling_upper", _r_scaling_upper,
                 {"R_sequence": (4.0, 8.0, 16.0, 32.0), "inv_p": 1.0, "inv_q": 1.0,
                  "inv_r": 1.0}, _v_scaling_upper),
    CatalogEntry("scaling_lower", "run_scaling_lower", _r_scaling_lower,
                 {"lambda_sequence": (1.0, 2.0, 4.0, 8.0, 16.0), "inv_p": 0.5,
                  "inv_q": 0.5, "bump_radius": 1.0 / 64}, _v_scaling_lower),
    CatalogEntry("critical_divergence", "run_critical_divergence", _r_critical,
                 {"p": 4.0, "q": 4.0, "beta": 0.5, "gamma": 0.5,
                  "cutoff_sequence": _CUTS}, _v_critical),
    CatalogEntry("critical_divergence_log_power", "run_critical_divergence", _r_critical,
                 {"p": 4.0, "q": 4.0, "beta": 0.4, "gamma": 0.4,
                  "cutoff_sequence": _CUTS}, _v_critical),
    CatalogEntry("critical_divergence_convergent", "run_critical_divergence", _r_critical,
                 {"p": 4.0, "q": 4.0, "beta": 0.6, "gamma": 0.6,
                  "cutoff_sequence": _CUTS}, _v_critical),
    CatalogEntry("critical_divergence_linear", "run_critical_divergence", _r_critical,
                 {"p": 2.0, "q": math.inf, "beta": 1.0, "gamma": 0.0,
                  "cutoff_sequence": _CUTS}, _v_critical),
    CatalogEntry("sharpness_interior", "run_sharpness_interior", _r_sharp_interior,
                 {"p": 3.0, "q": 3.0, "alpha": 4 / 3}, _v_sharp_interior),
    CatalogEntry("sharpness_endpoint", "run_sharpness_endpoint", _r_sharp_endpoint,
                 {"p": 1.5, "q_endpoint": math.inf, "alpha": 1.0}, _v_sharp_endpoint),
    CatalogEntry("sharpness_endpoint_boundary", "run_sharpness_endpoint", _r_sharp_endpoint,
                 {"p": 1.5, "q_endpoint": math.inf, "alpha": 1.5}, _v_sharp_endpoint),
    CatalogEntry("mollifier_blowup", "run_mollifier_blowup", _r_mollifier,
                 {"alpha": 2.0, "epsilon_sequence": tuple(2.0 ** -np.arange(5, 15))},
                 _v_mollifier),
    CatalogEntry("interpolation_crossover", "run_interpolation_crossover", _r_interp,
                 {"r1": 1.0, "r2": 4.0, "theta": 0.5, "alpha": 2.0, "cells": 1600.0},
                 _v_interp),
    CatalogEntry("oneil_check", "run_oneil_check", _r_oneil, {"cells": 3000.0}, _v_n1),
    CatalogEntry("half_norm_uniformity", "run_half_norm_uniformity", _r_half, {}, _v_n1),
    CatalogEntry("barycentric", "run_barycentric", _r_bary,
                 {"draws": 50.0, "seed": 20240601.0}, _v_bary),
    CatalogEntry("region_classification", "run_region_classification", _r_regions,
                 {"points": 41.0}),
]}


def resolve_options(experiment_id, overrides=None):
    """Defaults merged with overrides; unknown keys are rejected."""
    if experiment_id not in CATALOG:
        raise DomainError(f"unknown experiment {experiment_id!r}; "
                          f"choose from {', '.join(sorted(CATALOG))}")
    entry = CATALOG[experiment_id]
    opts = dict(entry.defaults)
    for k, v in (overrides or {}).items():
        if k not in opts:
            raise DomainError(f"{experiment_id} has no option {k!r}; "
                              f"known: {', '.join(sorted(opts)) or 'none'}")
        if isinstance(opts[k], tuple):
            v = tuple(float(x) for x in np.atleast_1d(v))
        elif isinstance(v, tuple):
            if len(v) != 1:
                raise DomainError(f"{experiment_id}.{k} expects a single number")
            v = v[0]
        opts[k] = v if isinstance(v, tuple) else float(v)
    return opts


def validate_experiment(experiment_id, params, overrides=None):
    opts = resolve_options(experiment_id, overrides)
    entry = CATALOG[experiment_id]
    if entry.validate is not None:
        entry.validate(params, opts)
    return opts


def run_experiment(experiment_id, params, overrides=None):
    """Run one catalog entry; each report echoes its resolved options."""
    opts = validate_experiment(experiment_id, params, overrides)
    reports = CATALOG[experiment_id].runner(params, opts)
    echo = {"experiment": experiment_id, "n": params.n, "s": params.s,
            **{k: list(v) if isinstance(v, tuple) else v for k, v in opts.items()}}
    for r in reports:
        r.config = echo
    return reports


def catalog_function_set():
    """Functions used across the catalog, for norm-engine cross checks."""
    funcs = {label + ":f": f for label, f, _, _ in oneil_pairs()}
    funcs.update({label + ":g": g for label, _, g, _ in oneil_pairs()})
    funcs["powerlog_critical"] = PowerLog(0.25, 0.5, 1.0)
    funcs["mollifier"] = Mollifier(0.01)
    return funcs
