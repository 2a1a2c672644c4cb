"""Times the routing kernels: compiled extension vs pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [reps]

The two implementations must agree bit-for-bit, so this only reports speed;
the parity tests live in tests/test_kernels.py.
"""

import array
import random
import sys
import time

from antmesh_sim import _kernels_py

try:
    from antmesh_sim import _kernels

    IMPLS = [("compiled", _kernels), ("pure", _kernels_py)]
except ImportError:
    IMPLS = [("pure", _kernels_py)]


def bench_select(impl, reps, cols, draws):
    t0 = time.perf_counter()
    acc = 0
    for i in range(reps):
        col = cols[i % len(cols)]
        u = draws[i % len(draws)]
        acc += impl.select_index(col, u, 0.8, -1)
    return time.perf_counter() - t0, acc


def bench_reinforce(impl, reps, cols):
    t0 = time.perf_counter()
    for i in range(reps):
        impl.reinforce(cols[i % len(cols)], i % 8, 0.25)
    return time.perf_counter() - t0


def main():
    reps = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    rng = random.Random(7)
    cols = []
    for _ in range(64):
        col = array.array("d", [rng.random() for _ in range(8)])
        total = sum(col)
        for k in range(len(col)):
            col[k] /= total
        cols.append(col)
    draws = [rng.random() for _ in range(4096)]

    print(f"{reps} reps per kernel")
    base = {}
    for name, impl in IMPLS:
        dt_sel, acc = bench_select(impl, reps, [c[:] for c in cols], draws)
        dt_rf = bench_reinforce(impl, reps, [c[:] for c in cols])
        base[name] = (dt_sel, dt_rf)
        print(f"  {name:9s} select_index {dt_sel * 1e9 / reps:8.1f} ns/op   "
              f"reinforce {dt_rf * 1e9 / reps:8.1f} ns/op   (checksum {acc})")
    if len(base) == 2:
        sel = base["pure"][0] / base["compiled"][0]
        rf = base["pure"][1] / base["compiled"][1]
        print(f"  speedup: select_index x{sel:.1f}, reinforce x{rf:.1f}")


if __name__ == "__main__":
    main()
