#!/usr/bin/env python3
"""Compare the compiled and pure-Python closure kernels.

Usage: python benchmarks/bench_closure.py [--repeat N]

Times full concept enumeration on the synthetic film benchmark and on a set
of denser random contexts where the lattice grows into the tens of
thousands of concepts.
"""

import argparse
import random
import time

from conceptprobe import FormalContext, generate_benchmark
from conceptprobe.kernels import ACTIVE_IMPL, available_implementations


def random_dense(n_obj, n_attr, density, seed):
    rng = random.Random(seed)
    rows = [
        sum(1 << m for m in range(n_attr) if rng.random() < density)
        for _ in range(n_obj)
    ]
    return FormalContext(
        f"dense-{n_obj}x{n_attr}@{density}",
        [f"g{i}" for i in range(n_obj)],
        [f"m{j}" for j in range(n_attr)],
        rows,
    )


def bench(ctx, repeat):
    impls = available_implementations()
    sizes = {}
    timings = {}
    for name, fn in impls.items():
        best = float("inf")
        for _ in range(repeat):
            start = time.perf_counter()
            result = fn(ctx.rows, ctx.cols, ctx.n_objects, ctx.n_attributes, 1 << 24)
            best = min(best, time.perf_counter() - start)
        sizes[name] = len(result)
        timings[name] = best
    assert len(set(sizes.values())) == 1, "kernels disagree on concept count"
    return next(iter(sizes.values())), timings


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    contexts = [
        ("film benchmark 245x127", generate_benchmark(127, 245, trilogy=True, seed=42)),
        ("dense 40x40 d=0.30", random_dense(40, 40, 0.30, 1)),
        ("dense 80x60 d=0.25", random_dense(80, 60, 0.25, 2)),
        ("dense 120x90 d=0.20", random_dense(120, 90, 0.20, 3)),
    ]

    print(f"active kernel: {ACTIVE_IMPL}")
    print(f"{'context':<26} {'concepts':>9}  " + "  ".join(
        f"{name:>10}" for name in available_implementations()
    ) + "   speedup")
    for label, ctx in contexts:
        count, timings = bench(ctx, args.repeat)
        cells = "  ".join(f"{timings[name] * 1000:9.2f}ms" for name in timings)
        if "c" in timings and "python" in timings:
            speedup = f"{timings['python'] / timings['c']:8.1f}x"
        else:
            speedup = "       -"
        print(f"{label:<26} {count:>9}  {cells}  {speedup}")


if __name__ == "__main__":
    main()
