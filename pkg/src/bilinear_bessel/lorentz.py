"""Lorentz quasi-norms of sampled and radial functions.

Sampled functions are piecewise constant: each value carries a measure
(a grid cell or a radial shell). For such step functions both the
rearrangement integral and the distribution integral can be evaluated
without discretization error, so disagreement between the two methods
signals a bug rather than a resolution limit.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .kernel import unit_ball_volume
from .quadrature import gauss_on_panels, graded_edges


@dataclass(frozen=True)
class LorentzIndex:
    """Index (p, alpha) of L^{p,alpha}; alpha may be inf."""

    p: float
    alpha: float

    def __post_init__(self):
        if not (0 < self.p < math.inf):
            raise DomainError(f"Lorentz p must be finite and positive, got {self.p}")
        if not self.alpha > 0:
            raise DomainError(f"Lorentz alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class MeasuredSamples:
    """Values of a step function and the measure each value occupies."""

    values: np.ndarray
    measures: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        m = np.broadcast_to(np.asarray(self.measures, dtype=float), np.shape(self.values)).ravel()
        if np.any(m < 0):
            raise DomainError("measures must be nonnegative")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "measures", np.array(m))


@dataclass(frozen=True)
class GridFunction:
    """Samples at the centers of a uniform grid of cubes.

    ``origin`` is the lower corner of the grid and ``spacing`` the cube side.
    """

    dimension: int
    origin: tuple
    spacing: float
    samples: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.samples, dtype=float)
        if a.ndim != self.dimension:
            raise DomainError(f"samples have {a.ndim} axes for dimension {self.dimension}")
        if not self.spacing > 0:
            raise DomainError("grid spacing must be positive")
        object.__setattr__(self, "samples", a)
        object.__setattr__(self, "origin", tuple(float(o) for o in np.atleast_1d(self.origin)))

    @property
    def cell_measure(self):
        return self.spacing ** self.dimension

    @property
    def values(self):
        return self.samples.ravel()

    @property
    def measures(self):
        return np.full(self.samples.size, self.cell_measure)

    def axis(self, k=0):
        return self.origin[k] + self.spacing * (np.arange(self.samples.shape[k]) + 0.5)

    def points(self):
        axes = [self.axis(k) for k in range(self.dimension)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    @classmethod
    def sample(cls, func, n, lo, hi, cells):
        """Sample an analytic function at the cell centers of [lo, hi]^n."""
        h = (hi - lo) / cells
        axis = lo + h * (np.arange(cells) + 0.5)
        if n == 1:
            vals = func.profile(np.abs(axis - func.center_vector(1)[0]), 1)
        else:
            pts = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1)
            vals = func.profile(np.linalg.norm(pts - func.center_vector(n), axis=-1), n)
        return cls(n, (lo,) * n, h, vals)

    def to_csv(self):
        """Rows of coordinates and value (n = 1 and n = 2 only)."""
        pts = self.points().reshape(-1, self.dimension)
        rows = [",".join([*(f"x{k}" for k in range(self.dimension)), "value"])]
        for p, v in zip(pts, self.values):
            rows.append(",".join(repr(float(c)) for c in (*p, v)))
        return "\n".join(rows) + "\n"


def _measured(f):
    if isinstance(f, (GridFunction, MeasuredSamples)):
        return np.abs(f.values), f.measures
    raise DomainError(f"expected sampled function, got {type(f).__name__}")


def _sorted_desc(f):
    v, m = _measured(f)
    order = np.argsort(-v, kind="stable")
    return v[order], m[order]


def distribution_function(f, thresholds):
    """d_f(lam) = measure of {|f| > lam} at each threshold."""
    v, m = _measured(f)
    order = np.argsort(v, kind="stable")
    v, m = v[order], m[order]
    tail = np.concatenate([np.cumsum(m[::-1])[::-1], [0.0]])
    idx = np.searchsorted(v, np.asarray(thresholds, dtype=float), side="right")
    return tail[idx]


def decreasing_rearrangement(f, t):
    """f*(t) = inf{lam : d_f(lam) <= t}, a right-continuous step function."""
    a, m = _sorted_desc(f)
    cum = np.cumsum(m)
    k = np.atleast_1d(np.searchsorted(cum, np.asarray(t, dtype=float), side="right"))
    out = np.zeros(k.shape)
    ok = k < a.size
    out[ok] = a[k[ok]]
    return out.reshape(np.shape(t)) if np.ndim(t) else float(out[0])


def _norm_rearrangement(f, p, q):
    a, m = _sorted_desc(f)
    keep = (a > 0) & (m > 0)
    a, m = a[keep], m[keep]
    if a.size == 0:
        return 0.0
    cum = np.cumsum(m)
    if q == math.inf:
        return float(np.max(a * cum ** (1.0 / p)))
    lead = np.log(a.max())
    jumps = np.diff(np.concatenate([[0.0], cum ** (q / p)]))
    total = float(np.sum(np.exp(q * (np.log(a) - lead)) * jumps)) * p / q
    return math.exp(lead) * total ** (1.0 / q)


def _norm_distribution(f, p, q, nodes=512):
    v, _ = _measured(f)
    pos = v[v > 0]
    if pos.size == 0:
        return 0.0
    tiny = np.finfo(float).tiny
    grid = np.geomspace(max(0.5 * pos.min(), tiny), max(2.0 * pos.max(), 2 * tiny), nodes)
    lam = np.unique(np.concatenate([[0.0], grid, pos]))
    d = distribution_function(f, lam)
    if q == math.inf:
        return float(np.max(lam[1:] * d[:-1] ** (1.0 / p)))
    lead = pos.max()
    pieces = d[:-1] ** (q / p) * np.diff((lam / lead) ** q) / q
    return lead * (p * float(np.sum(pieces))) ** (1.0 / q)


def lorentz_norm(f, index, method="rearrangement"):
    """||f||_{L^{p,alpha}} of a sampled function.

    ``method`` selects the rearrangement integral or the distribution integral.
    """
    if method == "rearrangement":
        return _norm_rearrangement(f, index.p, index.alpha)
    if method == "distribution":
        return _norm_distribution(f, index.p, index.alpha)
    raise DomainError(f"unknown method {method!r}")


def lp_norm_samples(f, p):
    v, m = _measured(f)
    if p == math.inf:
        return float(v[m > 0].max()) if np.any(m > 0) else 0.0
    top = float(v[m > 0].max()) if np.any(m > 0) else 0.0
    if top == 0.0:
        return 0.0
    return top * float(np.sum(m * (v / top) ** p)) ** (1.0 / p)


# ---------------------------------------------------------------------------
# radial functions on an annulus
# ---------------------------------------------------------------------------

def _log_shell_rule(r_in, r_out):
    edges = graded_edges(math.log(r_in), math.log(r_out), left=True,
                         max_width=0.25, split=1.0, floor=1e-14)
    return gauss_on_panels(edges)


def _log_shell_measure(n, logr, r_in):
    """log of v_n (R^n - r_in^n)."""
    return (math.log(unit_ball_volume(n)) + n * logr
            + np.log(-np.expm1(n * (math.log(r_in) - logr))))


def _refine_max(fn, nodes, values):
    """Polish the largest sampled value of fn by a bounded search between neighbours."""
    k = int(np.nanargmax(values))
    lo, hi = nodes[max(k - 1, 0)], nodes[min(k + 1, nodes.size - 1)]
    best = float(values[k])
    if hi > lo:
        res = minimize_scalar(lambda x: -fn(x), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * max(1.0, abs(lo))})
        best = max(best, -float(res.fun))
    return best


def lorentz_norm_truncated(func, index, inner_cutoff, n, rtol_monotone=1e-9):
    """Lorentz norm of func restricted to inner_cutoff < |x| < support.

    The profile must be nonincreasing on that annulus, so every superlevel
    set is an annulus whose outer radius inverts the profile. Substituting
    lam = phi(R) in the distribution integral leaves a one-dimensional
    integral in log R.
    """
    p, q = index.p, index.alpha
    rho = func.support
    if not (0 < inner_cutoff < rho < math.inf):
        raise DomainError("need 0 < inner_cutoff < support < inf")
    if np.any(func.center_vector(n) != 0):
        raise DomainError("truncated norm needs a function centered at the origin")
    u, w = _log_shell_rule(inner_cutoff, rho)
    lphi = func.log_abs_profile_at_log(u, n)
    slope = -func.log_slope_at_log(u, n)
    if np.any(slope < -rtol_monotone):
        return _piecewise_monotone_norm(func, index, inner_cutoff, n)
    log_d = _log_shell_measure(n, u, inner_cutoff)
    log_edge = float(func.log_abs_profile_at_log(np.array([math.log(rho * (1 - 1e-14))]), n)[0])
    log_dmax = math.log(unit_ball_volume(n)) + math.log(rho ** n - inner_cutoff ** n)
    if q == math.inf:
        peak = _refine_max(
            lambda x: float(_log_shell_measure(n, np.array([x]), inner_cutoff)[0] / p
                            + func.log_abs_profile_at_log(np.array([x]), n)[0]),
            u, log_d / p + lphi)
        return math.exp(max(peak, log_dmax / p + log_edge))
    expo = (q / p) * log_d + q * lphi
    edge_expo = (q / p) * log_dmax + q * log_edge
    lead = max(float(np.max(expo)), edge_expo)
    with np.errstate(invalid="ignore"):
        body = np.where(np.isfinite(lphi), np.exp(expo - lead) * slope, 0.0)
    total = float(np.sum(w * body)) + math.exp(edge_expo - lead) / q
    return math.exp((math.log(p * total) + lead) / q)


def _piecewise_monotone_norm(func, index, inner_cutoff, n, per_unit=40, min_nodes=4000):
    """Distribution integral for a profile made of finitely many monotone runs.

    On a fine grid in log R each run is inverted by interpolation, so the
    superlevel set of every level is a union of annuli with known radii.
    """
    p, q = index.p, index.alpha
    rho = func.support
    lo, hi = math.log(inner_cutoff), math.log(rho * (1 - 1e-14))
    m = max(min_nodes, int(per_unit * (hi - lo)))
    u = np.linspace(lo, hi, m)
    lphi = func.log_abs_profile_at_log(u, n)
    if not np.all(np.isfinite(lphi)):
        raise DomainError("profile vanishes inside the annulus")
    step = np.sign(np.diff(lphi))
    cuts = [0] + [i + 1 for i in range(step.size - 1) if step[i] != step[i + 1] and step[i + 1] != 0] + [m - 1]
    levels = np.unique(lphi)
    logv = math.log(unit_ball_volume(n))
    meas = np.zeros(levels.size)
    for a, b in zip(cuts[:-1], cuts[1:]):
        uu, ll = u[a:b + 1], lphi[a:b + 1]
        if ll[-1] <= ll[0]:
            # decreasing run: {phi > lam} = [uu[0], u(lam))
            u_lam = np.interp(levels, ll[::-1], uu[::-1], left=uu[-1], right=uu[0])
            lo_u, hi_u = np.full(levels.size, uu[0]), u_lam
        else:
            u_lam = np.interp(levels, ll, uu, left=uu[0], right=uu[-1])
            lo_u, hi_u = u_lam, np.full(levels.size, uu[-1])
        meas += np.exp(logv + n * hi_u) - np.exp(logv + n * lo_u)
    meas = np.maximum(meas, 0.0)
    d_total = unit_ball_volume(n) * (rho ** n - inner_cutoff ** n)
    lead = levels.max()
    if q == math.inf:
        return float(np.max(np.exp(levels) * meas ** (1.0 / p)))
    body = meas ** (q / p) * np.exp(q * (levels - lead))
    total = float(np.sum(0.5 * (body[1:] + body[:-1]) * np.diff(levels)))
    total += d_total ** (q / p) * math.exp(q * (levels.min() - lead)) / q
    return math.exp(lead) * (p * total) ** (1.0 / q)


def radial_lorentz_norm(profile, n, index, r_in, r_out, rtol_monotone=1e-9):
    """Lorentz norm of x -> profile(|x|) on r_in < |x| < r_out by rearrangement.

    With a nonincreasing profile, f*(t) = profile(R) where t is the annulus
    measure v_n (R^n - r_in^n); the norm integral is taken in log t.
    """
    p, q = index.p, index.alpha
    if not (0 < r_in < r_out):
        raise DomainError("need 0 < r_in < r_out")
    vn = unit_ball_volume(n)
    log_tmax = math.log(vn) + n * math.log(r_out) + math.log(-math.expm1(n * math.log(r_in / r_out)))
    # below t = v_n r_in^n e^-20 the radius is r_in to within e^-20
    log_lo = min(log_tmax - 1.0, math.log(vn) + n * math.log(r_in) - 20.0)
    lt, w = gauss_on_panels(graded_edges(log_lo, log_tmax, right=True,
                                         max_width=0.25, split=1.0, floor=1e-14))
    lt = np.concatenate([[log_lo], lt, [log_tmax]])
    radius = (r_in ** n + np.exp(lt) / vn) ** (1.0 / n)
    phi = np.abs(np.asarray(profile(np.minimum(radius, r_out)), dtype=float))
    if np.any(np.diff(phi) > rtol_monotone * phi[:-1]):
        raise DomainError("profile is not nonincreasing on the annulus")
    if q == math.inf:
        def weak(x):
            r = min((r_in ** n + math.exp(x) / vn) ** (1.0 / n), r_out)
            return math.exp(x / p) * abs(float(np.asarray(profile(np.array([r]))).ravel()[0]))
        return _refine_max(weak, lt, np.exp(lt / p) * phi)
    body = np.exp(q * lt[1:-1] / p) * phi[1:-1] ** q
    head = (p / q) * math.exp(q * log_lo / p) * phi[0] ** q
    return float(np.sum(w * body) + head) ** (1.0 / q)


def radial_samples(profile_values, edges, n):
    """Step function constant on the shells edges[i] <= |x| < edges[i+1]."""
    e = np.asarray(edges, dtype=float)
    meas = unit_ball_volume(n) * np.diff(e ** n)
    return MeasuredSamples(np.asarray(profile_values, dtype=float), meas)
