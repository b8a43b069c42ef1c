"""Numerical verification lab for the bilinear Bessel potential.

J_s(f, g)(x) = int G_s(y) f(x - y) g(x + y) dy, with G_s the Bessel kernel
of order s in dimension n.
"""

from .errors import (BesselLabError, ConfigError, CutoffNonconvergenceError, DomainError,
                     EnvelopeViolation, FitFailureError, InconclusiveDivergenceError,
                     QuadratureError)
from .funcfam import (Constant, Dilate, Indicator, Mollifier, PowerLog, Scaled, SmoothBump,
                      Translate, evaluate, from_record, lp_norm, sup_norm, to_record)
from .kernel import (BesselKernel, KernelEvalSpec, PotentialParams, eval_bessel_kernel,
                     eval_riesz_kernel, fit_kernel_constants, get_kernel, total_mass)
from .lorentz import (GridFunction, LorentzIndex, MeasuredSamples, decreasing_rearrangement,
                      distribution_function, lorentz_norm, lorentz_norm_truncated)
from .operator import (BilinearEvalResult, QuadratureSpec, bilinear_bessel,
                       bilinear_bessel_grid, bilinear_bessel_many, bilinear_riesz,
                       linear_bessel, linear_bessel_many)

__version__ = "0.1.0"

__all__ = [
    "BesselKernel", "BesselLabError", "BilinearEvalResult", "ConfigError", "Constant",
    "CutoffNonconvergenceError", "Dilate", "DomainError", "EnvelopeViolation",
    "FitFailureError", "GridFunction", "InconclusiveDivergenceError", "Indicator",
    "KernelEvalSpec", "LorentzIndex", "MeasuredSamples", "Mollifier", "PotentialParams",
    "PowerLog", "QuadratureError", "QuadratureSpec", "Scaled", "SmoothBump", "Translate",
    "bilinear_bessel", "bilinear_bessel_grid", "bilinear_bessel_many", "bilinear_riesz",
    "decreasing_rearrangement", "distribution_function", "eval_bessel_kernel",
    "eval_riesz_kernel", "evaluate", "fit_kernel_constants", "from_record", "get_kernel",
    "linear_bessel", "linear_bessel_many", "lorentz_norm", "lorentz_norm_truncated",
    "lp_norm", "sup_norm", "to_record", "total_mass",
]
