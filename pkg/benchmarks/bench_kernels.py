"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Both modules are imported directly, so the TWISTLAB_BACKEND flag does not
matter here.  Numba compile time is excluded with one warm-up call per kernel.
"""

import argparse
import json
import sys
import timeit

import numpy as np

from twistlab import _kernels_numba as nb
from twistlab import _kernels_numpy as ref


def cases(rng):
    X = rng.standard_normal((2048, 64)) + 1j * rng.standard_normal((2048, 64))
    X[rng.uniform(size=X.shape) < 0.2] = 0
    y = np.abs(rng.standard_normal(100_000)) + 1e-3
    L = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    A = rng.standard_normal((48, 48)) + 1j * rng.standard_normal((48, 48))
    return [
        ("row_pnorms p=2, 2048x64", "row_pnorms", (X, 2.0)),
        ("row_pnorms p=1.5, 2048x64", "row_pnorms", (X, 1.5)),
        ("log_ratio_rows p=2, 2048x64", "log_ratio_rows", (X, 2.0)),
        ("log_rank_rows, 2048x64", "log_rank_rows", (X,)),
        ("kp_prefix_sq_norms, N=1e5", "kp_prefix_sq_norms", (y,)),
        ("sign_average, N=12", "sign_average", (L,)),
        ("jacobi_svd, 48x48", "jacobi_svd", (A, 1e-13, 60)),
    ]


def best_time(fn, args, repeat):
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", default=None, help="also write results to this file")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    rows = []
    print(f"{'kernel':32} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
    for label, name, a in cases(rng):
        f_nb, f_np = getattr(nb, name), getattr(ref, name)
        f_nb(*a)  # compile
        t_np = best_time(f_np, a, args.repeat)
        t_nb = best_time(f_nb, a, args.repeat)
        rows.append({"kernel": label, "numpy_s": t_np, "numba_s": t_nb, "speedup": t_np / t_nb})
        print(f"{label:32} {t_np * 1e3:11.3f} {t_nb * 1e3:11.3f} {t_np / t_nb:7.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
