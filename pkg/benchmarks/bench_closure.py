"""Benchmark: compiled closure kernel versus the pure-Python fallback.

Runs the same saturation workload (all directed closure calls between the
class representatives of a small window) through both implementations and
reports wall-clock times.

Usage: python benchmarks/bench_closure.py [n m k]
"""

import sys
import time

from mclex import classify
from mclex import _closure_py
from mclex.closure import col_star_mask, encode_column, instantiate

try:
    from mclex import _closure_c
except ImportError:
    _closure_c = None


def workload(n, m, k):
    mats = [c.rep for c in classify(n, m, k).classes]
    jobs = []
    for M in mats:
        inst = {}
        for N in mats:
            if N.k not in inst:
                inst[N.k] = [(M.m, instantiate(M, N.k))]
            jobs.append(
                (
                    N.n,
                    N.k,
                    inst[N.k],
                    col_star_mask(N),
                    encode_column(N.right_column, N.k + 1),
                )
            )
    return jobs


def run(kernel, jobs):
    t0 = time.perf_counter()
    acc = 0
    for n, k, mats, r0, stop in jobs:
        acc ^= kernel.closure_mask(n, k, mats, r0, stop)
    return time.perf_counter() - t0, acc


def main():
    n, m, k = (int(a) for a in sys.argv[1:4]) if len(sys.argv) > 3 else (3, 3, 2)
    jobs = workload(n, m, k)
    print(f"window ({n},{m},{k}): {len(jobs)} closure calls")

    t_py, acc_py = run(_closure_py, jobs)
    print(f"python: {t_py:8.3f} s")
    if _closure_c is None:
        print("c:      unavailable (extension not built)")
        return
    t_c, acc_c = run(_closure_c, jobs)
    print(f"c:      {t_c:8.3f} s   speedup x{t_py / t_c:.1f}")
    if acc_py != acc_c:
        print("MISMATCH between backends!")
        sys.exit(1)


if __name__ == "__main__":
    main()
