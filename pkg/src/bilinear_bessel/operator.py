"""Bilinear and linear Bessel potentials by breakpoint-aware quadrature.

Every integral here has the form int prod_i phi_i(|y - c_i|) dy: a product
of radial profiles with different centers. The engine integrates such
products with composite Gauss rules split at every radius where a factor
is discontinuous or singular, and refined geometrically toward singular
points. In dimensions two and three the centers are usually collinear and
the angular integral is split at the crossing angles; otherwise a tensor
angular grid is used.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .divergence import classify_truncations
from .errors import DomainError, QuadratureError
from .funcfam import AnalyticFunction
from .kernel import (MIN_RADIUS, KernelEvalSpec, get_kernel, riesz_constant,
                     sphere_area)
from .lorentz import GridFunction
from .quadrature import ORDER, gauss_on_panels, graded_edges

_EPS = 1e-12


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature controls.

    inner_cutoff: excise the ball |y| < inner_cutoff around the kernel center.
    outer_radius: truncate the kernel beyond this radius.
    radial_nodes: node budget setting the uniform panel width.
    angular_nodes: angular resolution (dimensions two and three).
    split_radius: geometric refinement is used within this distance of a
        singular point.
    """

    inner_cutoff: float = 0.0
    outer_radius: float = 20.0
    radial_nodes: int | None = None
    angular_nodes: int = 256
    split_radius: float = 0.1

    def __post_init__(self):
        if self.inner_cutoff < 0 or not self.outer_radius > self.inner_cutoff:
            raise DomainError("need 0 <= inner_cutoff < outer_radius")
        if self.radial_nodes is not None and self.radial_nodes < 4 * ORDER:
            raise DomainError("radial node budget too small")

    def panel_width(self, n):
        nodes = self.radial_nodes or (4096 if n == 1 else 1024)
        return 2.0 * self.outer_radius * ORDER / nodes


@dataclass(frozen=True)
class BilinearEvalResult:
    value: float
    diverged: bool = False
    cutoff_used: float = 0.0
    detail: dict = field(default_factory=dict, compare=False)


@dataclass
class _Factor:
    profile: object
    center: np.ndarray
    breaks: tuple
    singular: float
    support: float
    is_kernel: bool = False


def _function_factor(func, center, n):
    return _Factor(lambda r, f=func: f.profile(r, n), center,
                   tuple(func.breaks(n)), float(func.singular_exponent), float(func.support))


def _kernel_factor(kernel, center, support, singular):
    # off-center nodes in the angular rules can land inside the floor ball,
    # whose mass is accounted for separately
    def prof(r):
        return kernel(np.maximum(r, MIN_RADIUS))
    return _Factor(prof, center, (), singular, support, True)


def _as_point(x, n):
    x = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if x.size != n:
        raise DomainError(f"point has {x.size} coordinates, expected {n}")
    return x


# ---------------------------------------------------------------------------
# one dimension
# ---------------------------------------------------------------------------

def _special_points_1d(factors, lo, hi):
    pts = {lo, hi}
    for fac in factors:
        c = float(fac.center[0])
        pts.add(c)
        for b in (*fac.breaks, fac.support):
            if math.isfinite(b):
                pts.update((c - b, c + b))
    return np.array(sorted(p for p in pts if lo <= p <= hi))


def _is_singular_at(factors, y):
    for fac in factors:
        if (fac.singular > 0 or fac.is_kernel) and abs(y - fac.center[0]) <= _EPS * max(1.0, abs(y)):
            return True
    return False


def _floor_at(factors, y):
    for fac in factors:
        if fac.is_kernel and abs(y - fac.center[0]) <= _EPS * max(1.0, abs(y)):
            return MIN_RADIUS
    return 1e-15


def _integrate_1d(factors, spec, cutoff):
    lo, hi = -math.inf, math.inf
    for fac in factors:
        lo = max(lo, fac.center[0] - fac.support)
        hi = min(hi, fac.center[0] + fac.support)
    if not hi > lo:
        return 0.0
    pts = _special_points_1d(factors, lo, hi)
    if cutoff > 0:
        # excise (-cutoff, cutoff) around the frame origin
        inner = [p for p in pts if -cutoff < p < cutoff]
        pts = np.array(sorted({*pts, *[c for c in (-cutoff, cutoff) if lo < c < hi]}
                              - set(inner)))
    width = spec.panel_width(1)
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if cutoff > 0 and a >= -cutoff and b <= cutoff:
            continue
        total += _piece(factors, a, b, spec, width,
                        cut_left=(cutoff > 0 and a == cutoff),
                        cut_right=(cutoff > 0 and b == -cutoff))
    return total


def _piece(factors, a, b, spec, width, cut_left=False, cut_right=False):
    if not b > a:
        return 0.0
    sl, sr = _is_singular_at(factors, a), _is_singular_at(factors, b)
    floor = min(_floor_at(factors, a) if sl else 1.0, _floor_at(factors, b) if sr else 1.0)
    # the ball of radius MIN_RADIUS about the kernel center is added analytically
    if sl and _floor_at(factors, a) == MIN_RADIUS:
        a += MIN_RADIUS
    if sr and _floor_at(factors, b) == MIN_RADIUS:
        b -= MIN_RADIUS
    if not b > a:
        return 0.0
    if cut_left or cut_right:
        floor = min(floor, 1e-3 * abs(a if cut_left else b))
    edges = graded_edges(a, b, left=sl or cut_left, right=sr or cut_right, max_width=width,
                         split=spec.split_radius, floor=floor)
    y, w = gauss_on_panels(edges)
    vals = np.ones_like(y)
    for fac in factors:
        vals *= fac.profile(np.abs(y - fac.center[0]))
    return float(np.sum(w * vals))


# ---------------------------------------------------------------------------
# dimensions two and three
# ---------------------------------------------------------------------------

def _radial_points(factors, lo, hi, n):
    pts = {lo, hi}
    sing = set()
    for fac in factors:
        d = float(np.linalg.norm(fac.center))
        for b in (*fac.breaks, fac.support):
            if math.isfinite(b):
                pts.update((abs(d - b), d + b))
        pts.add(d)
        if fac.singular > 0 or fac.is_kernel:
            sing.add(d)
    arr = np.array(sorted(p for p in pts if lo <= p <= hi))
    return arr, sing


def _axis(factors):
    axis = None
    for fac in factors:
        d = np.linalg.norm(fac.center)
        if d > 0:
            e = fac.center / d
            if axis is None:
                axis = e
            elif abs(abs(float(e @ axis)) - 1.0) > 1e-12:
                return None
    if axis is None:
        axis = np.zeros(factors[0].center.size)
        axis[0] = 1.0
    return axis


def _angular_integral(factors, rho, axis, n, nodes):
    """Integral over the unit sphere of prod phi_i(|rho w - c_i|) in the axial case."""
    projs = [float(fac.center @ axis) for fac in factors]
    cuts = {-1.0, 1.0}
    sing_ends = set()
    for fac, c in zip(factors, projs):
        if c == 0:
            continue
        for b in (*fac.breaks, fac.support):
            if math.isfinite(b):
                mu = (rho * rho + c * c - b * b) / (2.0 * rho * c)
                if -1 < mu < 1:
                    cuts.add(mu)
        if (fac.singular > 0 or fac.is_kernel) and abs(rho - abs(c)) < 0.5 * abs(c):
            sing_ends.add(math.copysign(1.0, c))
    cuts = sorted(cuts)
    per = max(2, nodes // (ORDER * 4))
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if n == 2:
            # integrate in theta to absorb the (1 - mu^2)^(-1/2) weight
            ta, tb = math.acos(b), math.acos(a)
            edges = graded_edges(ta, tb, left=(b in sing_ends), right=(a in sing_ends),
                                 max_width=(tb - ta) / per, split=0.25 * (tb - ta),
                                 floor=1e-10)
            th, w = gauss_on_panels(edges)
            mu = np.cos(th)
            w = 2.0 * w
        else:
            edges = graded_edges(a, b, left=(a in sing_ends), right=(b in sing_ends),
                                 max_width=(b - a) / per, split=0.25 * (b - a), floor=1e-14)
            mu, w = gauss_on_panels(edges)
            w = sphere_area(n - 1) * w * (1 - mu * mu) ** ((n - 3) / 2)
        vals = np.ones_like(mu)
        for fac, c in zip(factors, projs):
            dist = np.sqrt(np.maximum(rho * rho + c * c - 2.0 * rho * c * mu, 0.0))
            vals *= fac.profile(dist)
        total += float(np.sum(w * vals))
    return total


def _sphere_grid(n, nodes):
    if n == 2:
        th = 2 * math.pi * np.arange(nodes) / nodes
        return np.stack([np.cos(th), np.sin(th)], axis=-1), np.full(nodes, 2 * math.pi / nodes)
    mu, wm = np.polynomial.legendre.leggauss(max(8, nodes // 2))
    ph = 2 * math.pi * np.arange(nodes) / nodes
    M, P = np.meshgrid(mu, ph, indexing="ij")
    S = np.sqrt(1 - M * M)
    pts = np.stack([S * np.cos(P), S * np.sin(P), M], axis=-1).reshape(-1, 3)
    w = (wm[:, None] * np.full(nodes, 2 * math.pi / nodes)[None, :]).ravel()
    return pts, w


def _integrate_nd(factors, spec, cutoff, n):
    hi = math.inf
    for fac in factors:
        hi = min(hi, float(np.linalg.norm(fac.center)) + fac.support)
    lo = cutoff
    if not hi > lo:
        return 0.0
    pts, sing = _radial_points(factors, lo, hi, n)
    axis = _axis(factors)
    grid = None if axis is not None else _sphere_grid(n, spec.angular_nodes)
    width = spec.panel_width(n)
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        left, right = a in sing, b in sing
        floor = 1e-12 * max(b, 1e-300)
        if cutoff > 0 and a == lo:
            left, floor = True, 1e-3 * cutoff
        if a == 0:
            a, floor = MIN_RADIUS, MIN_RADIUS
        edges = graded_edges(a, b, left=left, right=right, max_width=width,
                             split=spec.split_radius, floor=floor)
        rho, w = gauss_on_panels(edges)
        ang = np.empty(rho.size)
        for k, r in enumerate(rho):
            if grid is None:
                ang[k] = _angular_integral(factors, r, axis, n, spec.angular_nodes)
            else:
                dirs, wd = grid
                vals = np.ones(wd.size)
                for fac in factors:
                    vals *= fac.profile(np.linalg.norm(r * dirs - fac.center, axis=-1))
                ang[k] = float(np.sum(wd * vals))
        total += float(np.sum(w * rho ** (n - 1) * ang))
    return total


# ---------------------------------------------------------------------------
# shared driver
# ---------------------------------------------------------------------------

def _origin_exponent(factors):
    total = 0.0
    for fac in factors:
        if np.linalg.norm(fac.center) <= _EPS and (fac.singular > 0):
            total += fac.singular
    return total


def _head(factors, n, kernel, s):
    """Mass of the ball |y - c_kernel| < MIN_RADIUS from the kernel's power law."""
    kern = next(f for f in factors if f.is_kernel)
    others = 1.0
    for fac in factors:
        if fac is kern:
            continue
        d = float(np.linalg.norm(fac.center - kern.center))
        if d <= _EPS and fac.singular > 0:
            return 0.0
        others *= float(fac.profile(np.array([d]))[0])
    return sphere_area(n) * kernel.small_constant() * MIN_RADIUS ** s / s * others


def _integrate(factors, n, spec, cutoff):
    if n == 1:
        return _integrate_1d(factors, spec, cutoff)
    return _integrate_nd(factors, spec, cutoff, n)


def _evaluate(factors, n, spec, params, kernel, head_ok=True):
    """Integral with divergence detection at a stacked singular origin."""
    cutoff = spec.inner_cutoff
    stacked = _origin_exponent(factors) >= n - 1e-9
    if cutoff > 0:
        return BilinearEvalResult(_integrate(factors, n, spec, cutoff), False, cutoff)
    if not stacked:
        val = _integrate(factors, n, spec, 0.0)
        if head_ok and kernel is not None:
            val += _head(factors, n, kernel, params.s)
        return BilinearEvalResult(val, False, 0.0)
    start = 0.5 * min(spec.split_radius, 1.0)
    check = classify_truncations(
        lambda eps: np.array([_integrate(factors, n, spec, e) for e in np.atleast_1d(eps)]),
        start=start, floor=MIN_RADIUS)
    if check.status == "inconclusive":
        raise QuadratureError("cutoff sequence at the origin neither settles nor grows")
    return BilinearEvalResult(float(check.values[-1]), check.diverged,
                              float(check.cutoffs[-1]), {"divergence": check})


def _kernel_support(spec, kernel_kind):
    return spec.outer_radius if kernel_kind == "bessel" else math.inf


def _check_stacking(factors):
    """Reject non-integrable coincident singularities away from the origin."""
    sing = [f for f in factors if f.singular > 0 and np.linalg.norm(f.center) > _EPS]
    for i, a in enumerate(sing):
        for b in sing[i + 1:]:
            if np.linalg.norm(a.center - b.center) <= _EPS:
                raise QuadratureError("coincident singularities away from the kernel center")


def _bilinear(params, f, g, x, spec, kernel_spec, kind):
    n = params.n
    x = _as_point(x, n)
    if kind == "bessel":
        kernel = get_kernel(params, kernel_spec)
        prof = kernel
    else:
        kernel = None
        c = riesz_constant(params)
        prof = lambda r: c * np.asarray(r, dtype=float) ** (params.s - n)  # noqa: E731
    factors = [
        _kernel_factor(prof, np.zeros(n), _kernel_support(spec, kind), n - params.s),
        _function_factor(f, x - f.center_vector(n), n),
        _function_factor(g, g.center_vector(n) - x, n),
    ]
    _check_stacking(factors)
    res = _evaluate(factors, n, spec, params, kernel, head_ok=(kind == "bessel"))
    if kind != "bessel" and spec.inner_cutoff == 0 and not res.diverged:
        others = f.profile(np.array([np.linalg.norm(x - f.center_vector(n))]), n)[0] \
            * g.profile(np.array([np.linalg.norm(x - g.center_vector(n))]), n)[0]
        head = sphere_area(n) * c * MIN_RADIUS ** params.s / params.s * others
        res = replace(res, value=res.value + float(head))
    return res


def bilinear_bessel(params, f: AnalyticFunction, g: AnalyticFunction, x,
                    spec=QuadratureSpec(), kernel_spec=KernelEvalSpec()):
    """J_s(f, g)(x) = int G_s(y) f(x - y) g(x + y) dy."""
    return _bilinear(params, f, g, x, spec, kernel_spec, "bessel")


def bilinear_riesz(params, f, g, x, spec=QuadratureSpec()):
    """Same with the Riesz kernel c |y|^(s-n) on all of R^n."""
    return _bilinear(params, f, g, x, spec, None, "riesz")


def linear_bessel(params, f, x, spec=QuadratureSpec(), kernel_spec=KernelEvalSpec()):
    """J_s f(x) = int G_s(x - z) f(z) dz, integrated around the center of f.

    Here ``inner_cutoff`` excises the ball around the center of f.
    """
    n = params.n
    x = _as_point(x, n)
    kernel = get_kernel(params, kernel_spec)
    cf = f.center_vector(n)
    factors = [
        _function_factor(f, np.zeros(n), n),
        _kernel_factor(kernel, x - cf, spec.outer_radius, n - params.s),
    ]
    res = _evaluate(factors, n, spec, params, kernel)
    return res


def bilinear_bessel_many(params, f, g, points, spec=QuadratureSpec(),
                         kernel_spec=KernelEvalSpec()):
    """Evaluate at each row of ``points`` (a 1-D array when n = 1)."""
    pts = np.asarray(points, dtype=float)
    if params.n == 1:
        pts = pts.reshape(-1, 1)
    return [bilinear_bessel(params, f, g, p, spec, kernel_spec) for p in pts]


def linear_bessel_many(params, f, points, spec=QuadratureSpec(), kernel_spec=KernelEvalSpec()):
    pts = np.asarray(points, dtype=float)
    if params.n == 1:
        pts = pts.reshape(-1, 1)
    return np.array([linear_bessel(params, f, p, spec, kernel_spec).value for p in pts])


# ---------------------------------------------------------------------------
# dyadic decomposition
# ---------------------------------------------------------------------------

def dyadic_weight(k, params):
    """a_k = 2^(k(n-s)) for k >= 0 and exp(-2^(-k)/4) for k < 0."""
    if k >= 0:
        return 2.0 ** (k * (params.n - params.s))
    return math.exp(-(2.0 ** (-k)) / 4.0)


def dyadic_piece(params, k, f, g, x, spec=QuadratureSpec()):
    """B_k = int_{|y| < 2^-k} f(x - y) g(x + y) dy."""
    n = params.n
    x = _as_point(x, n)
    ball = _Factor(lambda r: np.ones(np.shape(r)), np.zeros(n), (), 0.0, 2.0 ** -k)
    factors = [ball, _function_factor(f, x - f.center_vector(n), n),
               _function_factor(g, g.center_vector(n) - x, n)]
    return _integrate(factors, n, spec, 0.0)


def shell_sum(params, f, g, x, k_min=-5, k_max=38, mode="midpoint", spec=QuadratureSpec(),
              kernel_spec=KernelEvalSpec()):
    """sum_k (B_k - B_(k+1)) times a kernel value on the shell 2^-(k+1) <= |y| < 2^-k.

    mode "midpoint" uses G at 0.75 * 2^-k, mode "max" the value at the inner radius.
    """
    kernel = get_kernel(params, kernel_spec)
    ks = np.arange(k_min, k_max + 2)
    B = np.array([dyadic_piece(params, int(k), f, g, x, spec) for k in ks])
    shells = B[:-1] - B[1:]
    radii = 2.0 ** -ks[:-1].astype(float)
    at = 0.75 * radii if mode == "midpoint" else 0.5 * radii
    return float(np.sum(shells * kernel(at)))


# ---------------------------------------------------------------------------
# grid evaluation in one dimension
# ---------------------------------------------------------------------------

def _support_interval(func):
    c = func.center_vector(1)[0]
    return c - func.support, c + func.support


def bilinear_bessel_grid(params, f, g, lo, hi, cells, spec=QuadratureSpec(),
                         kernel_spec=KernelEvalSpec()):
    """J_s(f, g) at the cell centers of [lo, hi] for n = 1.

    Uses the discrete sum sum_j w_j f(x_i - j h) g(x_i + j h) with w_j the
    exact kernel mass of the cell [(j - 1/2) h, (j + 1/2) h]. Only offsets
    where the two supports can overlap are visited.
    """
    if params.n != 1:
        raise DomainError("grid evaluation is implemented for n = 1")
    h = (hi - lo) / cells
    x = lo + h * (np.arange(cells) + 0.5)
    fa, fb = _support_interval(f)
    ga, gb = _support_interval(g)
    if not all(map(math.isfinite, (fa, fb, ga, gb))):
        raise DomainError("grid evaluation needs compactly supported inputs")
    # y with x - y in supp f and x + y in supp g for some grid x
    y_lo = max(x[0] - fb, ga - x[-1], -spec.outer_radius)
    y_hi = min(x[-1] - fa, gb - x[0], spec.outer_radius)
    if y_hi < y_lo:
        return GridFunction(1, (lo,), h, np.zeros(cells))
    j_lo, j_hi = int(math.floor(y_lo / h)) - 1, int(math.ceil(y_hi / h)) + 1
    c = math.ceil(spec.inner_cutoff / h - 0.5) if spec.inner_cutoff > 0 else 0
    w = get_kernel(params, kernel_spec).cell_weights_1d(h, j_lo, j_hi)
    if c > 0:
        w[np.abs(np.arange(j_lo, j_hi + 1)) < c] = 0.0
    # f needed at x_i - j h for i in [0, cells), j in [j_lo, j_hi]
    f_idx = np.arange(-j_hi, cells - j_lo)
    g_idx = np.arange(j_lo, cells + j_hi)
    fs = f.profile(np.abs(lo + h * (f_idx + 0.5) - f.center_vector(1)[0]), 1)
    gs = g.profile(np.abs(lo + h * (g_idx + 0.5) - g.center_vector(1)[0]), 1)
    out = _kernels.bilinear_offsets(np.ascontiguousarray(fs, dtype=float), j_hi,
                                    np.ascontiguousarray(gs, dtype=float), -j_lo,
                                    np.ascontiguousarray(w), j_lo, cells)
    return GridFunction(1, (lo,), h, out)


def batch_to_csv(points, results):
    rows = ["x,value,diverged,cutoff_used"]
    for p, r in zip(np.atleast_1d(points), results):
        rows.append(f"{float(p)!r},{r.value!r},{int(r.diverged)},{r.cutoff_used!r}")
    return "\n".join(rows) + "\n"
