"""Compare the compiled and pure-Python canonical labeling kernels.

    python3 benchmarks/bench_canon.py [--repeat N]
"""

import argparse
import random
import time

from gac import _canon_py, canon
from gac.graph import Graph


def workloads():
    rng = random.Random(7)
    yield "all-ones 8x8", [Graph.from_matrix([[1] * 8 for _ in range(8)])]
    yield "cycle 8 + loops", [Graph.from_matrix(
        [[1 if j == (i + 1) % 8 or i == j else 0 for j in range(8)] for i in range(8)])]
    yield "random 6x6 (200)", [Graph.from_matrix([[rng.choice([0, 0, 1, 2]) for _ in range(6)]
                                                  for _ in range(6)]) for _ in range(200)]


def timed(kernel, graphs, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        keys = [canon.canonical_key(g, kernel) for g in graphs]
        best = min(best, time.perf_counter() - t)
    return best, keys


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if canon.BACKEND != "compiled":
        print("compiled kernel not built; only the Python kernel is available")
        return
    from gac import _canon_ext

    print(f"{'workload':<20} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, graphs in workloads():
        tp, kp = timed(_canon_py, graphs, args.repeat)
        tc, kc = timed(_canon_ext, graphs, args.repeat)
        assert kp == kc, "kernels disagree"
        print(f"{name:<20} {tp:>10.4f} {tc:>11.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
