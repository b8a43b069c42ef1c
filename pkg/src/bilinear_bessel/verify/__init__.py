"""Experiments, exponent geometry and report records."""

from .catalog import CATALOG, CatalogEntry, resolve_options, run_experiment, validate_experiment
from .experiments import (crossover_time, envelope_constant, run_barycentric,
                          run_critical_divergence, run_half_norm_uniformity,
                          run_interpolation_crossover, run_mollifier_blowup,
                          run_oneil_check, run_region_classification,
                          run_scaling_lower, run_scaling_upper, run_sharpness_endpoint,
                          run_sharpness_interior)
from .regions import (LABELS, Barycentric, ExponentTriple, RegionVerdict,
                      classify_exponents, compute_barycentric)
from .report import ExperimentReport, fit_line, fit_power_law, reports_to_csv, reports_to_json

__all__ = [
    "CATALOG", "CatalogEntry", "resolve_options", "run_experiment", "validate_experiment",
    "LABELS", "Barycentric", "ExperimentReport", "ExponentTriple", "RegionVerdict",
    "classify_exponents", "compute_barycentric", "crossover_time", "envelope_constant",
    "fit_line", "fit_power_law", "reports_to_csv", "reports_to_json", "run_barycentric",
    "run_critical_divergence", "run_half_norm_uniformity", "run_interpolation_crossover",
    "run_mollifier_blowup", "run_oneil_check", "run_region_classification",
    "run_scaling_lower", "run_scaling_upper", "run_sharpness_endpoint",
    "run_sharpness_interior",
]
