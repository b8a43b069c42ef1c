"""Hot loops with a numba path and a pure-numpy fallback.

Set ``BILINEAR_BESSEL_BACKEND=numpy`` to force the fallback. The default is
numba when it can be imported.
"""

import os

import numpy as np

_REQUESTED = os.environ.get("BILINEAR_BESSEL_BACKEND", "numba").strip().lower()

try:
    if _REQUESTED == "numpy":
        raise ImportError("numpy backend requested")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# subordination sums: S_i = sum_j w_j exp(-pi r_i^2 exp(-u_j) + phi_j)
# the second output keeps only even j, which is the half-resolution rule
# --------------------------------------------------------------------------

def subordination_sums_numpy(r, u, phi, w):
    r2 = np.pi * np.asarray(r, dtype=float) ** 2
    full = np.empty(r2.shape[0])
    half = np.empty(r2.shape[0])
    decay = np.exp(-u)
    chunk = max(1, 2_000_000 // max(u.shape[0], 1))
    for a in range(0, r2.shape[0], chunk):
        terms = np.exp(-np.outer(r2[a:a + chunk], decay) + phi) * w
        full[a:a + chunk] = terms.sum(axis=1)
        half[a:a + chunk] = 2.0 * terms[:, ::2].sum(axis=1)
    return full, half


def _subordination_sums_loop(r, u, phi, w):
    m = r.shape[0]
    k = u.shape[0]
    full = np.empty(m)
    half = np.empty(m)
    decay = np.exp(-u)
    for i in range(m):
        r2 = np.pi * r[i] * r[i]
        acc = 0.0
        acc_even = 0.0
        for j in range(k):
            t = w[j] * np.exp(phi[j] - r2 * decay[j])
            acc += t
            if j % 2 == 0:
                acc_even += t
        full[i] = acc
        half[i] = 2.0 * acc_even
    return full, half


# --------------------------------------------------------------------------
# discrete bilinear sum: out_i = sum_j w_j f[i - j + fo] g[i + j + go]
# --------------------------------------------------------------------------

def bilinear_offsets_numpy(f, f_shift, g, g_shift, w, j_lo, n_out):
    out = np.zeros(n_out)
    idx = np.arange(n_out)
    for jj in range(w.shape[0]):
        j = j_lo + jj
        fi = idx - j + f_shift
        gi = idx + j + g_shift
        ok = (fi >= 0) & (fi < f.shape[0]) & (gi >= 0) & (gi < g.shape[0])
        if not ok.any():
            continue
        out[ok] += w[jj] * f[fi[ok]] * g[gi[ok]]
    return out


def _bilinear_offsets_loop(f, f_shift, g, g_shift, w, j_lo, n_out):
    out = np.zeros(n_out)
    nf = f.shape[0]
    ng = g.shape[0]
    for i in range(n_out):
        acc = 0.0
        for jj in range(w.shape[0]):
            j = j_lo + jj
            fi = i - j + f_shift
            gi = i + j + g_shift
            if fi >= 0 and fi < nf and gi >= 0 and gi < ng:
                acc += w[jj] * f[fi] * g[gi]
        out[i] = acc
    return out


if HAVE_NUMBA:
    subordination_sums_numba = njit(cache=True)(_subordination_sums_loop)
    bilinear_offsets_numba = njit(cache=True)(_bilinear_offsets_loop)
    subordination_sums = subordination_sums_numba
    bilinear_offsets = bilinear_offsets_numba
else:
    subordination_sums_numba = None
    bilinear_offsets_numba = None
    subordination_sums = subordination_sums_numpy
    bilinear_offsets = bilinear_offsets_numpy
