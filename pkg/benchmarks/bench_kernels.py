#!/usr/bin/env python3
"""Compare the compiled multiply-pass kernel against the pure-Python
fallback on identical workloads.

The two backends are required to produce bit-identical results; this
script verifies that while timing them, then prints one table row per
workload.  Run from the repo root:

    python3 benchmarks/bench_kernels.py [--reps 5]
"""

import argparse
import time

from camsparse import AcceleratorConfig, extract_row, gen_random_csr, spmspv
from camsparse.engine import _kernels_c, required_index_bits

WORKLOADS = [
    # name, n, matrix density, vector density, modules, height
    ("small", 256, 0.05, 0.10, 4, 64),
    ("medium", 1024, 0.02, 0.05, 15, 512),
    ("large", 2048, 0.02, 0.05, 15, 512),
    ("tiled", 2048, 0.02, 0.20, 15, 64),
]


def best_time(func, reps):
    best = float("inf")
    for _ in range(reps):
        start = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()

    if _kernels_c is None:
        print("compiled kernel not built; run 'pip install -e .' first")
        return 1

    header = f"{'workload':<8} {'nnz(A)':>8} {'passes':>6} {'python':>10} {'cython':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, n, density, vec_density, k, h in WORKLOADS:
        A = gen_random_csr(n, n, density, seed=hash(name) % 2**32)
        B = extract_row(gen_random_csr(1, n, vec_density, seed=7), 0)
        cfg = AcceleratorConfig(modules=k, array_height=h,
                                index_bits=required_index_bits(n))

        result_py, metrics = spmspv(A, B, cfg, backend="python")
        result_cy, _ = spmspv(A, B, cfg, backend="cython")
        assert result_py == result_cy, "backends diverged"

        t_py = best_time(lambda: spmspv(A, B, cfg, backend="python"), args.reps)
        t_cy = best_time(lambda: spmspv(A, B, cfg, backend="cython"), args.reps)
        print(f"{name:<8} {A.nnz:>8} {metrics.passes:>6} "
              f"{t_py * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms {t_py / t_cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
