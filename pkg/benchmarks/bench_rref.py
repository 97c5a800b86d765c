"""Compare the numba kernels with the pure numpy fallbacks.

    python benchmarks/bench_rref.py [--sizes 16 48 96] [--p 3] [--repeat 5]

The size column is the row count for rref and the number of scanned
candidates for the combination scan.

Both paths are imported side by side from coringkit.linalg._kernels, so the
CORINGKIT_NO_NUMBA flag is not needed here.  Results are checked to agree
before any timing is reported.
"""
import argparse
import time

import numpy as np

from coringkit.linalg import _kernels as K


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 48, 96])
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        print("numba unavailable (or CORINGKIT_NO_NUMBA set); only the numpy path can run")
    rng = np.random.default_rng(args.seed)
    p = args.p

    print(f"{'kernel':<20}{'size':>6}{'numpy s':>12}{'numba s':>12}{'speedup':>9}")
    for n in args.sizes:
        m = rng.integers(0, p, size=(n, n + n // 2), dtype=np.int64)
        r_np, piv_np = K.rref_mod_p_numpy(m, p)
        t_np = best_of(lambda: K.rref_mod_p_numpy(m, p), args.repeat)
        line = f"{'rref_mod_p':<20}{n:>6}{t_np:>12.5f}"
        if K.HAVE_NUMBA:
            r_nb, piv_nb = K.rref_mod_p_numba(m, p)  # compile outside the timer
            assert np.array_equal(r_np, r_nb) and list(piv_np) == list(piv_nb)
            t_nb = best_of(lambda: K.rref_mod_p_numba(m, p), args.repeat)
            line += f"{t_nb:>12.5f}{t_np / t_nb:>9.1f}"
        print(line)

    # exhaustive combination scan: every combination of k basis matrices is
    # singular (shared zero row), so both paths walk all p**k candidates
    for k in (6, 8):
        d = 4
        mats = rng.integers(0, p, size=(k, d, d), dtype=np.int64)
        mats[:, 0, :] = 0
        total = p**k
        i_np = K.first_nonsingular_numpy(mats, p, 0, total)
        t_np = best_of(lambda: K.first_nonsingular_numpy(mats, p, 0, total), args.repeat)
        line = f"{'first_nonsingular':<20}{total:>6}{t_np:>12.5f}"
        if K.HAVE_NUMBA:
            assert K.first_nonsingular_numba(mats, p, 0, total) == i_np == -1
            t_nb = best_of(lambda: K.first_nonsingular_numba(mats, p, 0, total), args.repeat)
            line += f"{t_nb:>12.5f}{t_np / t_nb:>9.1f}"
        print(line)


if __name__ == "__main__":
    main()
