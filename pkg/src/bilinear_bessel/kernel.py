"""Bessel potential kernel evaluated by Gaussian subordination.

G_s(x) = (4 pi)^(-s/2) / Gamma(s/2) * int_0^inf exp(-pi|x|^2/t - t/(4 pi))
         t^((s-n)/2) dt/t

The t-integral is taken in the variable u = log t by the trapezoid rule,
which converges geometrically for this integrand. Each call is checked
against the half-resolution rule.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from . import _kernels
from .divergence import classify_truncations
from .errors import CutoffNonconvergenceError, DomainError, FitFailureError
from .quadrature import gauss_on_panels, graded_edges, graded_rule

MIN_RADIUS = 1e-12


@dataclass(frozen=True)
class PotentialParams:
    """Dimension ``n`` and order ``s`` with 0 < s < n."""

    n: int
    s: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.n}")
        if not (0.0 < self.s < self.n):
            raise DomainError(f"order must satisfy 0<s<n, got s={self.s}, n={self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "s", float(self.s))


@dataclass(frozen=True)
class KernelEvalSpec:
    t_min: float = 1e-8
    t_max: float = 1e3
    nodes: int = 2048
    tolerance: float = 1e-9

    def __post_init__(self):
        if not (0 < self.t_min < self.t_max):
            raise DomainError("need 0 < t_min < t_max")
        if self.nodes < 16:
            raise DomainError("need at least 16 subordination nodes")


def unit_ball_volume(n):
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def sphere_area(n):
    """Surface measure of the unit sphere; equals 2 when n = 1."""
    return n * unit_ball_volume(n)


def riesz_constant(params):
    n, s = params.n, params.s
    return math.gamma((n - s) / 2) / (2 ** s * math.pi ** (n / 2) * math.gamma(s / 2))


def eval_riesz_kernel(params, radius):
    r = np.asarray(radius, dtype=float)
    if np.any(r <= 0):
        raise DomainError("Riesz kernel needs positive radii")
    out = riesz_constant(params) * r ** (params.s - params.n)
    return out if out.ndim else float(out)


def eval_bessel_kernel(params, radius, spec=KernelEvalSpec()):
    """Direct subordination evaluation at one radius or an array of radii."""
    r = np.asarray(radius, dtype=float)
    flat = np.atleast_1d(r).ravel()
    if flat.size == 0:
        return np.empty(r.shape)
    if np.any(~np.isfinite(flat)) or np.any(flat < MIN_RADIUS):
        raise DomainError(f"radius must be finite and >= {MIN_RADIUS}")
    n, s = params.n, params.s
    rmin, rmax = flat.min(), flat.max()
    t_lo = min(spec.t_min, math.pi * rmin ** 2 / 40.0)
    t_hi = max(spec.t_max, 8.0 * math.pi * rmax)
    m = spec.nodes + 1 if spec.nodes % 2 == 0 else spec.nodes
    u = np.linspace(math.log(t_lo), math.log(t_hi), m)
    h = u[1] - u[0]
    w = np.full(m, h)
    w[0] = w[-1] = 0.5 * h
    phi = -np.exp(u) / (4 * math.pi) + 0.5 * (s - n) * u
    full, half = _kernels.subordination_sums(flat, u, phi, w)
    if np.any(np.abs(full - half) > spec.tolerance * np.abs(full) + 1e-300):
        bad = flat[np.argmax(np.abs(full - half) / np.maximum(full, 1e-300))]
        raise CutoffNonconvergenceError(
            f"subordination rule unsettled at r={bad:.3e} with {spec.nodes} nodes")
    pref = (4 * math.pi) ** (-s / 2) / math.gamma(s / 2)
    out = (pref * full).reshape(r.shape)
    return out if out.ndim else float(out)


class BesselKernel:
    """Tabulated kernel: cubic spline of log(G r^(n-s)) in log r.

    Radii above the table range fall back to direct evaluation.
    """

    per_octave = 64
    r_table_max = 64.0

    def __init__(self, params, spec=KernelEvalSpec()):
        self.params = params
        self.spec = spec
        self.power = params.n - params.s
        octaves = math.log2(self.r_table_max / MIN_RADIUS)
        k = int(math.ceil(octaves * self.per_octave)) + 1
        self._lr = np.linspace(math.log(MIN_RADIUS), math.log(self.r_table_max), k)
        radii = np.exp(self._lr)
        vals = eval_bessel_kernel(params, radii, spec)
        self._spline = CubicSpline(self._lr, np.log(vals) + self.power * self._lr)

    def __call__(self, radius):
        r = np.asarray(radius, dtype=float)
        if np.any(r < MIN_RADIUS * (1 - 1e-12)):
            raise DomainError(f"radius must be >= {MIN_RADIUS}")
        lr = np.log(np.maximum(r, MIN_RADIUS))
        out = np.exp(self._spline(lr) - self.power * lr)
        far = r > self.r_table_max
        if np.any(far):
            out = np.array(out, dtype=float, copy=True)
            out[far] = eval_bessel_kernel(self.params, r[far], self.spec)
        return out if np.ndim(out) else float(out)

    def small_constant(self, radius=MIN_RADIUS):
        """G(r) r^(n-s) at the given small radius."""
        return float(np.exp(self._spline(math.log(radius))))

    def radial_mass(self, a, b, split=1.0, panel=0.25):
        """Mass of G over the shell a <= |y| <= b; a may be 0."""
        n, s = self.params.n, self.params.s
        omega = sphere_area(n)
        total = 0.0
        lo = a
        if a < MIN_RADIUS:
            total += omega * self.small_constant() * MIN_RADIUS ** s / s
            lo = MIN_RADIUS
        if not b > lo:
            return total
        edges = graded_edges(lo, b, left=True, max_width=panel, split=split,
                             floor=MIN_RADIUS)
        x, w = gauss_on_panels(edges)
        return total + omega * float(np.sum(w * self(x) * x ** (n - 1)))

    def cell_weights_1d(self, h, j_lo, j_hi):
        """Integrals of G over the cells [(j-1/2)h, (j+1/2)h], n = 1 only."""
        if self.params.n != 1:
            raise DomainError("cell weights are defined for n = 1")
        j = np.arange(j_lo, j_hi + 1)
        out = np.empty(j.size)
        aj = np.abs(j)
        far = aj >= 2
        if np.any(far):
            x0, w0 = np.polynomial.legendre.leggauss(6)
            centers = aj[far] * h
            pts = centers[:, None] + 0.5 * h * x0[None, :]
            out[far] = 0.5 * h * (self(pts) * w0).sum(axis=1)
        near = {0: 2 * self.radial_mass(0, 0.5 * h) / 2,
                1: self.radial_mass(0.5 * h, 1.5 * h) / 2}
        for idx in np.nonzero(~far)[0]:
            out[idx] = near[int(aj[idx])]
        return out


@lru_cache(maxsize=16)
def get_kernel(params, spec=KernelEvalSpec()):
    return BesselKernel(params, spec)


def total_mass(params, spec=KernelEvalSpec(), r_max=60.0):
    """Integral of G over R^n (equals 1)."""
    return get_kernel(params, spec).radial_mass(0.0, r_max)


def annulus_mass(params, a, b, spec=KernelEvalSpec()):
    return get_kernel(params, spec).radial_mass(a, b)


def fourier_transform_1d(params, xi, spec=KernelEvalSpec(), r_max=40.0):
    """Fourier transform of G at frequency xi, n = 1, with e^(-2 pi i x xi)."""
    if params.n != 1:
        raise DomainError("one-dimensional transform needs n = 1")
    ker = get_kernel(params, spec)
    s = params.s
    xi = float(xi)
    head = 2 * ker.small_constant() * MIN_RADIUS ** s / s
    width = min(0.25, 0.125 / max(abs(xi), 1e-12))
    x, w = graded_rule(MIN_RADIUS, r_max, left=True, max_width=width, split=1.0,
                       floor=MIN_RADIUS)
    return head + 2 * float(np.sum(w * ker(x) * np.cos(2 * math.pi * xi * x)))


@dataclass(frozen=True)
class KernelConstants:
    c_small: float
    c_lower: float
    c_large: float
    c_decay: float
    r_squared: float
    sup_radius: float
    lower_flagged: bool


def fit_kernel_constants(params, spec=KernelEvalSpec(), small_points=200,
                         small_min=1e-8, large_points=60, large_range=(1.0, 10.0),
                         min_r_squared=0.98):
    """Fit the near-origin Riesz constant and the exponential tail.

    Near the origin G(r) r^(n-s) is sampled on a log grid in (0, 1]; its
    supremum and infimum bound the kernel against the Riesz power. The tail
    is fit as log G = log c_large - c_decay r on ``large_range``.
    """
    n, s = params.n, params.s
    ker = get_kernel(params, spec)
    rs = np.geomspace(small_min, 1.0, small_points)
    ratio = ker(rs) * rs ** (n - s)
    i = int(np.argmax(ratio))
    c_small, c_lower = float(ratio[i]), float(ratio.min())
    rl = np.linspace(*large_range, large_points)
    y = np.log(ker(rl))
    slope, icpt = np.polyfit(rl, y, 1)
    resid = y - (slope * rl + icpt)
    r2 = 1.0 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())
    if not (r2 >= min_r_squared and slope < 0):
        raise FitFailureError(f"tail fit R^2={r2:.4f}, decay={-slope:.4f}")
    return KernelConstants(c_small, c_lower, float(math.exp(icpt)), float(-slope),
                           r2, float(rs[i]), c_lower < 1e-6)


def lt_truncated_integral(params, t, cutoffs, spec=KernelEvalSpec(), r_max=1.0):
    """Integral of G^t over eps < |x| < r_max for each cutoff eps."""
    ker = get_kernel(params, spec)
    n = params.n
    omega = sphere_area(n)
    out = []
    for eps in np.atleast_1d(cutoffs):
        x, w = graded_rule(eps, r_max, left=True, max_width=0.25, split=r_max,
                           floor=eps)
        out.append(omega * float(np.sum(w * ker(x) ** t * x ** (n - 1))))
    return np.array(out)


def lt_membership(params, t, spec=KernelEvalSpec()):
    """Decide near-origin integrability of G^t by the cutoff test."""
    return classify_truncations(lambda e: lt_truncated_integral(params, t, e, spec),
                                floor=MIN_RADIUS)
