"""Composite Gauss-Legendre rules on graded panels."""

from functools import lru_cache

import numpy as np

ORDER = 8


@lru_cache(maxsize=32)
def _reference(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def gauss_on_panels(edges, order=ORDER):
    """Nodes and weights of the Gauss rule applied on each panel in ``edges``."""
    edges = np.asarray(edges, dtype=float)
    if edges.size < 2:
        return np.empty(0), np.empty(0)
    a = edges[:-1]
    h = np.diff(edges)
    keep = h > 0
    a, h = a[keep], h[keep]
    x0, w0 = _reference(order)
    nodes = (a[:, None] + h[:, None] * x0[None, :]).ravel()
    weights = (h[:, None] * w0[None, :]).ravel()
    return nodes, weights


def graded_edges(a, b, left=False, right=False, max_width=np.inf,
                 split=np.inf, floor=1e-14):
    """Panel edges on [a, b] refined geometrically toward singular endpoints.

    Within distance ``split`` of a flagged endpoint the panels halve in width
    down to ``floor``; elsewhere panels are uniform of width at most
    ``max_width``.
    """
    a, b = float(a), float(b)
    if not b > a:
        return np.array([a])
    length = b - a
    if left and right:
        mid = 0.5 * (a + b)
        lo = graded_edges(a, mid, left=True, max_width=max_width, split=split, floor=floor)
        hi = graded_edges(mid, b, right=True, max_width=max_width, split=split, floor=floor)
        return np.concatenate([lo, hi[1:]])
    if not (left or right):
        m = max(1, int(np.ceil(length / max_width))) if np.isfinite(max_width) else 1
        return np.linspace(a, b, m + 1)
    g = min(split, length)
    anchor = abs(a) if left else abs(b)
    floor = min(max(floor, 64 * np.finfo(float).eps * anchor), 0.5 * g)
    m = max(1, int(np.ceil(np.log2(g / floor))))
    offs = g * 2.0 ** -np.arange(m, -1, -1)
    offs = np.concatenate([[0.0], offs])
    rest = graded_edges(a + g, b, max_width=max_width) if g < length else np.array([b])
    if left:
        near = a + offs
        if g >= length:
            near[-1] = b
        return np.concatenate([near, rest[1:]]) if g < length else near
    far = graded_edges(a, b - g, max_width=max_width) if g < length else np.array([a])
    near = b - offs[::-1]
    if g >= length:
        near[0] = a
    return np.concatenate([far[:-1], near]) if g < length else near


def graded_rule(a, b, left=False, right=False, max_width=np.inf, split=np.inf,
                floor=1e-14, order=ORDER):
    return gauss_on_panels(
        graded_edges(a, b, left, right, max_width, split, floor), order)
