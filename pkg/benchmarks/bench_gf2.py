"""Compare the two packed elimination cores on random GF(2) matrices.

The package selects its reduction kernel at import time: a compiled
loop core when numba is importable (and F2COH_NO_NUMBA is unset), a
vectorized numpy core otherwise.  This script times both on the same
inputs, checks they produce bit-identical results, and prints the
speedup, so the fallback's cost is a number rather than a guess.

Run from the repository root:

    python3 benchmarks/bench_gf2.py
"""
import time

import numpy as np

from f2coh import gf2
from f2coh._kernels import HAS_NUMBA, rref_core_numba, rref_core_numpy

SHAPES = [(64, 64), (128, 256), (256, 256), (512, 512), (1024, 1024)]
REPEATS = 5
DENSITY = 0.35


def timed(core, words, ncols):
    """Best-of-REPEATS wall time; the core mutates, so copy each round."""
    best = float("inf")
    result = None
    for _ in range(REPEATS):
        work = np.ascontiguousarray(words.copy())
        t0 = time.perf_counter()
        rank, pivots = core(work, ncols, ncols)
        best = min(best, time.perf_counter() - t0)
        result = (rank, pivots.copy(), work)
    return best, result


def main():
    rng = np.random.default_rng(20240814)
    if HAS_NUMBA:
        # trigger the JIT compile outside the timed region
        warm = gf2.BitMatrix.from_dense(
            (rng.random((8, 8)) < 0.5).astype(np.uint8))
        rref_core_numba(np.ascontiguousarray(warm.words.copy()), 8, 8)
        print("numba core available; timings are post-compilation")
    else:
        print("numba core unavailable; only the numpy core is timed")
    print(f"{'shape':>12}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")

    for rows, cols in SHAPES:
        dense = (rng.random((rows, cols)) < DENSITY).astype(np.uint8)
        m = gf2.BitMatrix.from_dense(dense)
        t_np, res_np = timed(rref_core_numpy, m.words, m.cols)
        if not HAS_NUMBA:
            print(f"{rows:>5}x{cols:<6}  {t_np * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")
            continue
        t_nb, res_nb = timed(rref_core_numba, m.words, m.cols)
        if res_np[0] != res_nb[0] or not np.array_equal(res_np[1], res_nb[1]) \
                or not np.array_equal(res_np[2], res_nb[2]):
            raise SystemExit(f"cores disagree on {rows}x{cols}")
        print(f"{rows:>5}x{cols:<6}  {t_np * 1e3:>8.2f}ms  {t_nb * 1e3:>8.2f}ms"
              f"  {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
