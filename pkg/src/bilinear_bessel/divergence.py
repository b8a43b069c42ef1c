"""Cutoff-sequence tests deciding whether a truncated integral converges.

Two stages. Halving the cutoff and watching successive increments settles
geometric convergence and power-type divergence quickly. Increments that
shrink too slowly for that test are then measured on a doubling scale of
``L = log(e / eps)``: for increments of size ``L**-b`` the ratio of the
last two doubling increments is ``2**(1 - b)``, so ``b`` can be read off and
compared against the integrability threshold ``b = 1``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InconclusiveDivergenceError


@dataclass(frozen=True)
class DivergenceCheck:
    status: str
    cutoffs: np.ndarray
    values: np.ndarray
    increment_ratios: np.ndarray
    log_exponent: float = float("nan")
    detail: dict = field(default_factory=dict)

    @property
    def diverged(self):
        return self.status == "diverged"

    @property
    def converged(self):
        return self.status == "converged"


def increment_ratios(values):
    """Ratios of consecutive increments of a cutoff sequence."""
    v = np.asarray(values, dtype=float)
    d = np.diff(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = d[1:] / d[:-1]
    return np.where(np.isfinite(r), r, np.inf)


def halving_cutoffs(start=0.5, floor=1e-12, max_halvings=40):
    k = int(min(max_halvings, np.floor(np.log2(start / floor))))
    return start * 2.0 ** -np.arange(k + 1)


def classify_truncations(truncated, start=0.5, floor=1e-12, window=5,
                         threshold=0.9, max_halvings=40, exponent_margin=0.05,
                         strict=False):
    """Classify ``eps -> truncated(eps)`` as converging or diverging as eps -> 0.

    ``truncated`` accepts a 1-D array of cutoffs and returns the truncated
    integral at each. It should be nondecreasing as the cutoff shrinks.
    """
    eps = halving_cutoffs(start, floor, max_halvings)
    vals = np.asarray(truncated(eps), dtype=float)
    if not np.all(np.isfinite(vals)):
        return DivergenceCheck("diverged", eps, vals, np.array([np.inf]))
    ratios = increment_ratios(vals)
    tail = ratios[-window:]
    incs = np.diff(vals)
    scale = max(abs(vals[-1]), 1e-300)
    if np.all(np.abs(incs[-window:]) <= 1e-13 * scale):
        return DivergenceCheck("converged", eps, vals, ratios)
    if np.all(tail < threshold):
        return DivergenceCheck("converged", eps, vals, ratios)
    if np.all(tail >= threshold):
        # slow increments: estimate the log-scale decay exponent
        big = np.log(np.e / eps[-1])
        ls = np.array([big / 4.0, big / 2.0, big])
        lv = np.asarray(truncated(np.e * np.exp(-ls)), dtype=float)
        d1, d2 = lv[1] - lv[0], lv[2] - lv[1]
        if d1 <= 0 or not np.isfinite(d2):
            status = "diverged" if not np.isfinite(d2) else "inconclusive"
            b = float("nan")
        else:
            b = 1.0 - np.log2(d2 / d1)
            status = "diverged" if b <= 1.0 + exponent_margin else "converged"
        check = DivergenceCheck(status, eps, vals, ratios, b,
                                {"log_cutoffs": ls, "log_values": lv})
    else:
        check = DivergenceCheck("inconclusive", eps, vals, ratios)
    if strict and check.status == "inconclusive":
        raise InconclusiveDivergenceError(
            f"increment ratios {np.round(tail, 4)} straddle {threshold}")
    return check
