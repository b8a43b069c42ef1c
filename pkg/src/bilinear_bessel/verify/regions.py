"""Exponent-space geometry: region labels and barycentric coordinates."""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

_TOL = 1e-12

LABELS = ("StrongLebesgue", "FractionalSurfaceLorentz", "WeakEndpoint",
          "InfinityTriangle", "CriticalLineFail", "OutsideStripFail")


def _inv(x):
    return 0.0 if x == math.inf else 1.0 / x


@dataclass(frozen=True)
class ExponentTriple:
    """Reciprocal exponents (1/p, 1/q, 1/r), each in [0, 1] for p, q and >= 0 for r."""

    inv_p: float
    inv_q: float
    inv_r: float

    def __post_init__(self):
        if not (0 <= self.inv_p <= 1 and 0 <= self.inv_q <= 1 and self.inv_r >= 0):
            raise DomainError(f"reciprocal exponents out of range: {self}")

    @classmethod
    def from_exponents(cls, p, q, r):
        return cls(_inv(p), _inv(q), _inv(r))

    @property
    def p(self):
        return math.inf if self.inv_p == 0 else 1 / self.inv_p

    @property
    def q(self):
        return math.inf if self.inv_q == 0 else 1 / self.inv_q

    @property
    def r(self):
        return math.inf if self.inv_r == 0 else 1 / self.inv_r


@dataclass(frozen=True)
class RegionVerdict:
    label: str
    witnesses: tuple


def classify_exponents(triple, params):
    """Assign one of the six region labels to an exponent triple."""
    sigma = params.s / params.n
    a, b, c = triple.inv_p, triple.inv_q, triple.inv_r
    P = a + b
    if c > P + _TOL or c < P - sigma - _TOL:
        return RegionVerdict("OutsideStripFail", ("scaling: 1/r <= 1/p+1/q",
                                                  "dilation: 1/r >= 1/p+1/q-s/n"))
    if c <= _TOL:
        if abs(P - sigma) <= _TOL:
            return RegionVerdict("CriticalLineFail", ("log-power pair on 1/p+1/q = s/n",))
        return RegionVerdict("InfinityTriangle", ("Hoelder with G_s in L^t, t < n/(n-s)",))
    if abs(c - P) <= _TOL:
        return RegionVerdict("StrongLebesgue", ("Hoelder and Young with ||G_s||_1 = 1",))
    if abs(c - (P - sigma)) <= _TOL:
        edge = min(a, b) <= _TOL or max(a, b) >= 1 - _TOL
        if edge:
            return RegionVerdict("WeakEndpoint", ("endpoint estimate with p or q in {1, inf}",))
        return RegionVerdict("FractionalSurfaceLorentz", ("three-point Lorentz interpolation",))
    if P > sigma + _TOL:
        return RegionVerdict("FractionalSurfaceLorentz",
                             ("fixed-input interpolation between the two planes",))
    return RegionVerdict("InfinityTriangle",
                         ("interpolation of the L^(1/P) bound with the L^inf bound",))


@dataclass(frozen=True)
class Barycentric:
    theta0: float
    theta1: float
    theta2: float
    vertices: np.ndarray
    target: np.ndarray

    @property
    def weights(self):
        return np.array([self.theta0, self.theta1, self.theta2])

    def reconstruct(self):
        return self.weights @ self.vertices


def barycentric_window(p, q, params):
    """Open interval of admissible 1/p0 for the pair (p, q)."""
    a, b = _inv(p), _inv(q)
    return max(a, b, params.s / params.n), min(1.0, a + b)


def compute_barycentric(p, q, p0, params, tol=1e-12):
    """Weights expressing (1/p, 1/q, 1/p + 1/q - s/n) in the endpoint triangle.

    The vertices are (1, 1, 2 - s/n), (1/p0, 0, 1/p0 - s/n) and
    (0, 1/p0, 1/p0 - s/n).
    """
    a, b, z = _inv(p), _inv(q), _inv(p0)
    sigma = params.s / params.n
    lo, hi = barycentric_window(p, q, params)
    if not (1 < p < math.inf and 1 < q < math.inf):
        raise DomainError("need 1 < p, q < inf")
    if not (lo < z < hi):
        raise DomainError(f"1/p0 = {z} outside the window ({lo}, {hi})")
    t0 = ((a + b) - z) / (2.0 - z)
    t1 = (a - t0) / z
    t2 = (b - t0) / z
    verts = np.array([[1.0, 1.0, 2.0 - sigma], [z, 0.0, z - sigma], [0.0, z, z - sigma]])
    target = np.array([a, b, a + b - sigma])
    out = Barycentric(t0, t1, t2, verts, target)
    err = np.max(np.abs(out.reconstruct() - target))
    if err > tol or min(t0, t1, t2) < -tol or abs(t0 + t1 + t2 - 1) > tol:
        raise DomainError(f"barycentric reconstruction off by {err:.2e}")
    return out
