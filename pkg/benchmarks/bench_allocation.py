"""Benchmark the compiled selection kernel against the pure-Python one.

Both kernels share the same contract (`solve_kernel(values, costs,
budget)` over integer minor units), so each random instance is solved
by both, cross-checked, and timed. Run from the repo root:

    python3 benchmarks/bench_allocation.py
    python3 benchmarks/bench_allocation.py --sizes 8,12,16,20 --instances 50
"""

import argparse
import random
import time

from datamarket import _bnb_py
from datamarket.money import SCALE

try:
    from datamarket import _bnb as _compiled
except ImportError:
    _compiled = None


def make_instance(rng, size):
    costs = [rng.randint(1, 100 * SCALE) for _ in range(size)]
    values = [c + rng.randint(1, 50 * SCALE) for c in costs]
    budget = rng.randint(1, sum(costs))
    return values, costs, budget


def time_kernel(kernel, instances):
    start = time.perf_counter()
    results = [kernel.solve_kernel(v, c, b) for v, c, b in instances]
    return time.perf_counter() - start, results


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="8,12,16,20",
                        help="comma-separated item counts (default: 8,12,16,20)")
    parser.add_argument("--instances", type=int, default=50,
                        help="random instances per size (default: 50)")
    parser.add_argument("--seed", type=int, default=20260401,
                        help="rng seed (default: 20260401)")
    args = parser.parse_args(argv)

    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rng = random.Random(args.seed)

    if _compiled is None:
        print("compiled kernel not built; timing the pure-Python kernel only")
        print(f"{'items':>6} {'python us/solve':>16}")
        for size in sizes:
            instances = [make_instance(rng, size) for _ in range(args.instances)]
            elapsed, _ = time_kernel(_bnb_py, instances)
            print(f"{size:>6} {elapsed / len(instances) * 1e6:>16.1f}")
        return 0

    print(f"{'items':>6} {'python us/solve':>16} {'compiled us/solve':>18} {'speedup':>8}")
    for size in sizes:
        instances = [make_instance(rng, size) for _ in range(args.instances)]
        time_kernel(_compiled, instances[:2])  # warm-up
        py_elapsed, py_results = time_kernel(_bnb_py, instances)
        c_elapsed, c_results = time_kernel(_compiled, instances)
        if py_results != c_results:
            raise AssertionError(f"kernels disagree at size {size}")
        py_us = py_elapsed / len(instances) * 1e6
        c_us = c_elapsed / len(instances) * 1e6
        print(f"{size:>6} {py_us:>16.1f} {c_us:>18.1f} {py_elapsed / c_elapsed:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
