"""Analytic test functions.

Every function here is radial about some center, so each one is described
by a center, a radial profile, the radii where the profile is not smooth
and the power of its singularity at the center (if any). Quadrature code
relies only on that description.
"""

import math
from dataclasses import dataclass

import numpy as np

from .divergence import classify_truncations
from .errors import DomainError
from .kernel import sphere_area, unit_ball_volume
from .quadrature import gauss_on_panels, graded_edges


def _as_center(c):
    if np.ndim(c) == 0:
        return (float(c),)
    return tuple(float(v) for v in c)


class AnalyticFunction:
    """Common interface; subclasses are frozen dataclasses."""

    kind = ""

    def center_vector(self, n):
        c = np.zeros(n)
        cc = np.asarray(self.center, dtype=float).ravel()
        if cc.size > n:
            if np.any(cc[n:] != 0):
                raise DomainError(f"center {self.center} does not fit in dimension {n}")
            cc = cc[:n]
        c[:cc.size] = cc
        return c

    def profile(self, r, n):
        raise NotImplementedError

    def log_abs_profile(self, r, n):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.profile(r, n)))

    def log_abs_profile_at_log(self, logr, n):
        """log|phi| as a function of log r; usable far below the float range."""
        return self.log_abs_profile(np.exp(np.asarray(logr, dtype=float)), n)

    def profile_derivative(self, r, n):
        raise NotImplementedError(f"{self.kind} has no analytic derivative")

    def log_slope_at_log(self, logr, n):
        """r phi'(r) / phi(r) as a function of log r; zero where phi vanishes."""
        r = np.exp(np.asarray(logr, dtype=float))
        phi = self.profile(r, n)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(phi != 0, r * self.profile_derivative(r, n) / phi, 0.0)

    def breaks(self, n):
        return ()

    @property
    def singular_exponent(self):
        return 0.0

    @property
    def support(self):
        return math.inf

    def __call__(self, x, n=None):
        return evaluate(self, x, n)


def evaluate(func, x, n=None):
    """Evaluate at points of shape (..., n); plain arrays are read as n = 1."""
    x = np.asarray(x, dtype=float)
    if n is None:
        n = x.shape[-1] if x.ndim >= 1 and x.ndim > 1 else 1
    if n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        r = np.abs(x - func.center_vector(1)[0])
    else:
        if x.shape[-1] != n:
            raise DomainError(f"points have trailing size {x.shape[-1]}, expected {n}")
        r = np.linalg.norm(x - func.center_vector(n), axis=-1)
    return func.profile(r, n)


@dataclass(frozen=True)
class Indicator(AnalyticFunction):
    center: tuple = (0.0,)
    radius: float = 1.0
    kind = "indicator"

    def __post_init__(self):
        object.__setattr__(self, "center", _as_center(self.center))
        if not self.radius >= 0:
            raise DomainError("indicator radius must be >= 0")

    def profile(self, r, n):
        return (np.asarray(r) < self.radius).astype(float)

    def profile_derivative(self, r, n):
        return np.zeros_like(np.asarray(r, dtype=float))

    def breaks(self, n):
        return (self.radius,)

    @property
    def support(self):
        return self.radius


@dataclass(frozen=True)
class PowerLog(AnalyticFunction):
    """|x|^-a log(e/|x|)^-b on the ball of radius rho <= 1, zero elsewhere."""

    power_exp: float
    log_exp: float
    support_radius: float = 1.0
    kind = "powerlog"
    center = (0.0,)

    def __post_init__(self):
        if not (0 < self.support_radius <= 1):
            raise DomainError("support radius must lie in (0, 1]")
        if self.power_exp < 0:
            raise DomainError("power exponent must be >= 0")

    def log_abs_profile(self, r, n):
        r = np.asarray(r, dtype=float)
        out = np.full(r.shape, -np.inf)
        ok = (r > 0) & (r < self.support_radius)
        rr = r[ok]
        out[ok] = -self.power_exp * np.log(rr) - self.log_exp * np.log(np.log(np.e / rr))
        return out

    def log_abs_profile_at_log(self, logr, n):
        logr = np.asarray(logr, dtype=float)
        out = np.full(logr.shape, -np.inf)
        ok = logr < math.log(self.support_radius)
        lr = logr[ok]
        out[ok] = -self.power_exp * lr - self.log_exp * np.log1p(-lr)
        return out

    def profile(self, r, n):
        return np.exp(self.log_abs_profile(r, n))

    def profile_derivative(self, r, n):
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape)
        ok = (r > 0) & (r < self.support_radius)
        rr = r[ok]
        slope = -self.power_exp / rr + self.log_exp / (rr * np.log(np.e / rr))
        out[ok] = self.profile(rr, n) * slope
        return out

    def log_slope_at_log(self, logr, n):
        logr = np.asarray(logr, dtype=float)
        out = np.zeros(logr.shape)
        ok = logr < math.log(self.support_radius)
        out[ok] = -self.power_exp + self.log_exp / (1.0 - logr[ok])
        return out

    def breaks(self, n):
        return (self.support_radius,)

    @property
    def singular_exponent(self):
        return self.power_exp

    @property
    def support(self):
        return self.support_radius


@dataclass(frozen=True)
class Mollifier(AnalyticFunction):
    """Normalized indicator of the ball of radius epsilon."""

    epsilon: float
    kind = "mollifier"
    center = (0.0,)

    def __post_init__(self):
        if not (0 < self.epsilon < 0.125):
            raise DomainError("mollifier width must lie in (0, 1/8)")

    def height(self, n):
        return 1.0 / (unit_ball_volume(n) * self.epsilon ** n)

    def profile(self, r, n):
        return self.height(n) * (np.asarray(r) < self.epsilon)

    def profile_derivative(self, r, n):
        return np.zeros_like(np.asarray(r, dtype=float))

    def breaks(self, n):
        return (self.epsilon,)

    @property
    def support(self):
        return self.epsilon


@dataclass(frozen=True)
class Constant(AnalyticFunction):
    value: float = 1.0
    kind = "constant"
    center = (0.0,)

    def profile(self, r, n):
        return np.full(np.shape(r), float(self.value))

    def profile_derivative(self, r, n):
        return np.zeros(np.shape(r))

    @property
    def support(self):
        return math.inf if self.value != 0 else 0.0


@dataclass(frozen=True)
class SmoothBump(AnalyticFunction):
    """Equal to 1 for r <= inner, 0 for r >= outer, quintic taper between."""

    inner: float = 0.5
    outer: float = 1.0
    kind = "smoothbump"
    center = (0.0,)

    def __post_init__(self):
        if not (0 <= self.inner < self.outer):
            raise DomainError("need 0 <= inner < outer")

    def _t(self, r):
        return np.clip((np.asarray(r, dtype=float) - self.inner)
                       / (self.outer - self.inner), 0.0, 1.0)

    def profile(self, r, n):
        t = self._t(r)
        return 1.0 - t ** 3 * (10.0 - 15.0 * t + 6.0 * t ** 2)

    def profile_derivative(self, r, n):
        t = self._t(r)
        return -30.0 * t ** 2 * (1.0 - t) ** 2 / (self.outer - self.inner)

    def breaks(self, n):
        return (self.inner, self.outer)

    @property
    def support(self):
        return self.outer


@dataclass(frozen=True)
class Dilate(AnalyticFunction):
    """lam^norm_exp * base(lam x) for lam >= 1."""

    base: AnalyticFunction
    lam: float
    norm_exp: float = 0.0
    kind = "dilate"

    def __post_init__(self):
        if not self.lam >= 1:
            raise DomainError("dilation factor must be >= 1")

    @property
    def center(self):
        return tuple(c / self.lam for c in self.base.center)

    def profile(self, r, n):
        return self.lam ** self.norm_exp * self.base.profile(self.lam * np.asarray(r), n)

    def log_abs_profile(self, r, n):
        return self.norm_exp * math.log(self.lam) + self.base.log_abs_profile(
            self.lam * np.asarray(r), n)

    def log_abs_profile_at_log(self, logr, n):
        return self.norm_exp * math.log(self.lam) + self.base.log_abs_profile_at_log(
            np.asarray(logr) + math.log(self.lam), n)

    def profile_derivative(self, r, n):
        return self.lam ** (self.norm_exp + 1) * self.base.profile_derivative(
            self.lam * np.asarray(r), n)

    def log_slope_at_log(self, logr, n):
        return self.base.log_slope_at_log(np.asarray(logr) + math.log(self.lam), n)

    def breaks(self, n):
        return tuple(b / self.lam for b in self.base.breaks(n))

    @property
    def singular_exponent(self):
        return self.base.singular_exponent

    @property
    def support(self):
        return self.base.support / self.lam


@dataclass(frozen=True)
class Scaled(AnalyticFunction):
    """factor * base."""

    base: AnalyticFunction
    factor: float
    kind = "scaled"

    @property
    def center(self):
        return self.base.center

    def profile(self, r, n):
        return self.factor * self.base.profile(r, n)

    def log_abs_profile(self, r, n):
        with np.errstate(divide="ignore"):
            return math.log(abs(self.factor)) + self.base.log_abs_profile(r, n) \
                if self.factor != 0 else np.full(np.shape(r), -np.inf)

    def log_abs_profile_at_log(self, logr, n):
        if self.factor == 0:
            return np.full(np.shape(logr), -np.inf)
        return math.log(abs(self.factor)) + self.base.log_abs_profile_at_log(logr, n)

    def profile_derivative(self, r, n):
        return self.factor * self.base.profile_derivative(r, n)

    def log_slope_at_log(self, logr, n):
        return self.base.log_slope_at_log(logr, n)

    def breaks(self, n):
        return self.base.breaks(n)

    @property
    def singular_exponent(self):
        return self.base.singular_exponent if self.factor != 0 else 0.0

    @property
    def support(self):
        return self.base.support if self.factor != 0 else 0.0


@dataclass(frozen=True)
class Translate(AnalyticFunction):
    """base(x - shift)."""

    base: AnalyticFunction
    shift: tuple = (0.0,)
    kind = "translate"

    def __post_init__(self):
        object.__setattr__(self, "shift", _as_center(self.shift))

    @property
    def center(self):
        b, t = list(self.base.center), list(self.shift)
        m = max(len(b), len(t))
        b += [0.0] * (m - len(b))
        t += [0.0] * (m - len(t))
        return tuple(x + y for x, y in zip(b, t))

    def profile(self, r, n):
        return self.base.profile(r, n)

    def log_abs_profile(self, r, n):
        return self.base.log_abs_profile(r, n)

    def log_abs_profile_at_log(self, logr, n):
        return self.base.log_abs_profile_at_log(logr, n)

    def profile_derivative(self, r, n):
        return self.base.profile_derivative(r, n)

    def log_slope_at_log(self, logr, n):
        return self.base.log_slope_at_log(logr, n)

    def breaks(self, n):
        return self.base.breaks(n)

    @property
    def singular_exponent(self):
        return self.base.singular_exponent

    @property
    def support(self):
        return self.base.support


def is_radial(func, n):
    return not np.any(func.center_vector(n))


# ---------------------------------------------------------------------------
# Lebesgue norms
# ---------------------------------------------------------------------------

def _radial_power_integral(func, p, n, lo, hi):
    """omega * int_lo^hi |phi(r)|^p r^(n-1) dr, split at the break points.

    Pieces spanning more than a factor 4 in radius are integrated in log r.
    """
    pts = sorted({lo, hi, *[b for b in func.breaks(n) if lo < b < hi]})
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if a > 0 and b > 4 * a:
            v, w = gauss_on_panels(np.linspace(math.log(a), math.log(b),
                                               int(math.ceil(2 * math.log(b / a))) + 1))
            x = np.exp(v)
            with np.errstate(divide="ignore", over="ignore"):
                vals = np.exp(p * func.log_abs_profile(x, n) + n * v)
        else:
            edges = graded_edges(a, b, left=True, right=True, max_width=(b - a) / 8,
                                 split=0.25 * (b - a), floor=1e-13 * max(b, 1e-300))
            x, w = gauss_on_panels(edges)
            with np.errstate(divide="ignore", over="ignore"):
                vals = np.exp(p * func.log_abs_profile(x, n) + (n - 1) * np.log(x))
        total += float(np.sum(w * vals))
    return sphere_area(n) * total


def _singular_head(func, p, n, r0, l_big=1e8):
    """omega * int_0^r0 |phi|^p r^(n-1) dr in the variable L = log(e/r).

    Panels are uniform in log L up to ``l_big``; the rest is closed by the
    locally fitted power law in L.
    """
    l0 = math.log(math.e / r0)
    edges = np.exp(np.linspace(math.log(l0), math.log(l_big),
                               int(4 * math.log(l_big / l0)) + 1))
    ell, w = gauss_on_panels(edges)

    def integrand(ell):
        lr = 1.0 - np.asarray(ell, dtype=float)
        with np.errstate(over="ignore"):
            return np.exp(p * func.log_abs_profile_at_log(lr, n) + n * lr)

    total = float(np.sum(w * integrand(ell)))
    i1, i2 = integrand(np.array([l_big / 2, l_big]))
    if i2 > 0:
        c = math.log(i1 / i2) / math.log(2.0)
        if not c > 1:
            return math.inf
        total += float(i2) * l_big / (c - 1.0)
    return sphere_area(n) * total


def lp_norm(func, p, n, floor=1e-200):
    """L^p norm of an analytic function; returns inf when it diverges.

    Near a singular center the decision is made by the cutoff test on the
    truncated integrals; a converging head is then integrated on the log scale.
    """
    if p == math.inf:
        return sup_norm(func, n)
    if not p > 0:
        raise DomainError("p must be positive")
    if isinstance(func, (Scaled, Translate)):
        # homogeneity and translation invariance keep |factor|^p out of the integrand
        factor = abs(func.factor) if isinstance(func, Scaled) else 1.0
        return 0.0 if factor == 0 else factor * lp_norm(func.base, p, n, floor)
    supp = func.support
    if supp == 0:
        return 0.0
    if not math.isfinite(supp):
        vals = func.profile(np.array([0.0, 1.0, 10.0]), n)
        return 0.0 if not np.any(vals) else math.inf
    if func.singular_exponent > 0:
        r0 = 0.25 * min([b for b in func.breaks(n) if b > 0] + [supp])

        def truncated(eps):
            return np.array([_radial_power_integral(func, p, n, e, r0)
                             if e < r0 else 0.0 for e in np.atleast_1d(eps)])

        check = classify_truncations(truncated, start=r0 / 2, floor=floor,
                                     max_halvings=2000, exponent_margin=0.01)
        if check.status != "converged":
            return math.inf
        total = _singular_head(func, p, n, r0) + _radial_power_integral(func, p, n, r0, supp)
    else:
        total = _radial_power_integral(func, p, n, 0.0, supp)
    return total ** (1.0 / p)


def sup_norm(func, n):
    if func.support == 0:
        return 0.0
    if func.singular_exponent > 0:
        return math.inf
    hi = func.support if math.isfinite(func.support) else 1.0
    r = np.concatenate([np.linspace(0.0, hi, 4097),
                        *[b * np.array([1 - 1e-12, 1 + 1e-12]) for b in func.breaks(n)]])
    return float(np.max(np.abs(func.profile(r, n))))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_KINDS = {cls.kind: cls for cls in
          (Indicator, PowerLog, Mollifier, Constant, SmoothBump, Dilate, Scaled, Translate)}


def to_record(func):
    """Tagged dict record; nested functions become nested records."""
    rec = {"kind": func.kind}
    for name in func.__dataclass_fields__:
        v = getattr(func, name)
        if isinstance(v, AnalyticFunction):
            v = to_record(v)
        elif isinstance(v, tuple):
            v = list(v)
        rec[name] = v
    return rec


def from_record(rec):
    rec = dict(rec)
    kind = rec.pop("kind", None)
    if kind not in _KINDS:
        raise DomainError(f"unknown function kind {kind!r}")
    for k, v in list(rec.items()):
        if isinstance(v, dict):
            rec[k] = from_record(v)
    try:
        return _KINDS[kind](**rec)
    except TypeError as exc:
        raise DomainError(f"bad fields for {kind}: {exc}") from None
