#!/usr/bin/env python3
"""Timing comparison of the compiled and pure-Python compute kernels.

Runs each hot kernel (Gram-matrix assembly, residual norm, compensated
sum, lattice sum) and one end-to-end magnitude solve at a few problem
sizes, printing best-of-N wall times and the compiled speedup.

    python3 benchmarks/bench_backends.py [--sizes 500,1000,2000] [--repeats 5]
"""

import argparse
import time

import numpy as np

from magnitude import _pykernels
from magnitude import core

try:
    from magnitude import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_pair(label, make_fn, repeats, rows):
    py = best_of(make_fn(_pykernels), repeats)
    if _ckernels is None:
        rows.append((label, py, None, None))
        return
    cy = best_of(make_fn(_ckernels), repeats)
    rows.append((label, py, cy, py / cy))


def end_to_end(impl, points, scale):
    def run():
        z, dmin, _, _ = impl.exp_kernel(points, scale)
        kernel = core.KernelMatrix(entries=z, scale=scale)
        weighting = core.solve_weighting(kernel)
        return impl.compensated_sum(weighting.weights)

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="500,1000,2000,4000")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _ckernels is None:
        print("compiled backend not built; timing the pure-Python kernels only\n")

    rng = np.random.default_rng(8128)
    rows = []

    for n in sizes:
        points = np.ascontiguousarray(rng.random((n, 3)))
        bench_pair(
            f"exp_kernel          N={n:>5}",
            lambda impl, p=points: lambda: impl.exp_kernel(p, 1.0),
            args.repeats,
            rows,
        )

    big = np.ascontiguousarray(rng.random((sizes[-1], 3)))
    z = _pykernels.exp_kernel(big, 1.0)[0]
    w = np.linalg.solve(z, np.ones(len(z)))
    bench_pair(
        f"residual_inf        N={sizes[-1]:>5}",
        lambda impl: lambda: impl.residual_inf(z, w),
        args.repeats,
        rows,
    )

    x = rng.standard_normal(1_000_000) * 1e12
    bench_pair(
        "compensated_sum     n=1e6",
        lambda impl: lambda: impl.compensated_sum(x),
        args.repeats,
        rows,
    )

    bench_pair(
        "lattice_sum         dim=3 h=0.1",
        lambda impl: lambda: impl.lattice_sum(3, 0.1, 30.0),
        max(1, args.repeats // 2),
        rows,
    )

    n_solve = min(2000, sizes[-1])
    solve_pts = np.ascontiguousarray(rng.random((n_solve, 3)))
    bench_pair(
        f"magnitude solve     N={n_solve:>5}",
        lambda impl: end_to_end(impl, solve_pts, 1.0),
        max(1, args.repeats // 2),
        rows,
    )

    width = max(len(r[0]) for r in rows)
    header = f"{'kernel':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, py, cy, ratio in rows:
        cy_s = f"{cy * 1e3:8.2f}ms" if cy is not None else f"{'-':>10}"
        ratio_s = f"{ratio:7.1f}x" if ratio is not None else f"{'-':>8}"
        print(f"{label:<{width}}  {py * 1e3:8.2f}ms  {cy_s}  {ratio_s}")


if __name__ == "__main__":
    main()
