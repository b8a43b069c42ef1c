"""Compare the numba and numpy paths of the hot kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Prints the best wall time of each path and the largest relative difference
between their outputs.
"""

import argparse
import time

import numpy as np

from bilinear_bessel import _kernels


def best_time(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def subordination_case(m=2000, k=2049):
    r = np.geomspace(1e-6, 40.0, m)
    u = np.linspace(np.log(1e-14), np.log(400.0), k)
    phi = -np.exp(u) / (4 * np.pi) + 0.25 * u
    w = np.full(k, u[1] - u[0])
    return r, u, phi, w


def bilinear_case(cells=4000, offsets=4000, seed=0):
    rng = np.random.default_rng(seed)
    f = rng.random(cells + offsets)
    g = rng.random(cells + offsets)
    w = rng.random(offsets)
    j_lo = -offsets // 2
    return f, offsets // 2, g, offsets // 2, w, j_lo, cells


def rel_diff(a, b):
    a, b = np.ravel(a), np.ravel(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable; only the numpy path can run")
    cases = [
        ("subordination_sums", subordination_case(),
         _kernels.subordination_sums_numpy, _kernels.subordination_sums_numba),
        ("bilinear_offsets", bilinear_case(),
         _kernels.bilinear_offsets_numpy, _kernels.bilinear_offsets_numba),
    ]
    print(f"{'kernel':20s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, case, np_fn, nb_fn in cases:
        t_np, out_np = best_time(np_fn, case, args.repeat)
        if nb_fn is None:
            print(f"{name:20s} {t_np:10.4f} {'-':>10s} {'-':>8s} {'-':>13s}")
            continue
        nb_fn(*case)  # compile outside the timed region
        t_nb, out_nb = best_time(nb_fn, case, args.repeat)
        diff = rel_diff(out_nb, out_np)
        print(f"{name:20s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f} {diff:13.2e}")


if __name__ == "__main__":
    main()
