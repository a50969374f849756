"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 16 32 64] [--repeat 3]
"""

import argparse
import random
import time

from fwtsp import _kernels_py, kernels
from fwtsp.oracles import hungarian_ap
from fwtsp.fw import phase2_run
from fwtsp.greedy import phase1_run
from fwtsp.matrix import ReducedMatrix, random_matrix
from fwtsp.perm import random_tour
from fwtsp.tour import choose_roots


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--ctree-sizes", type=int, nargs="+", default=[10, 14, 18])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    compiled = kernels.BACKENDS.get("compiled")
    if compiled is None:
        print("compiled kernels not built; only the fallback can run")
    rng = random.Random(args.seed)

    print(f"{'kernel':<10}{'n':>5}{'python s':>12}{'compiled s':>12}{'speedup':>9}")
    for n in args.sizes:
        m = random_matrix(n, 1, 100, rng)
        # reduce by the optimal assignment so there is no negative cycle
        arr = ReducedMatrix(m, hungarian_ap(m).optimizer).to_array()
        tp, ref = best_of(lambda: _kernels_py.fw_apsp(arr), args.repeat)
        row = f"{'fw_apsp':<10}{n:>5}{tp:>12.4f}"
        if compiled:
            tc, got = best_of(lambda: compiled.fw_apsp(arr), args.repeat)
            assert (got[0] == ref[0]).all() and (got[1] == ref[1]).all()
            row += f"{tc:>12.4f}{tp / tc:>9.1f}"
        print(row)

    for n in args.ctree_sizes:
        m = random_matrix(n, 1, 100, rng)
        trace = phase1_run(m, random_tour(n, rng))
        r = ReducedMatrix(m, phase2_run(m, trace).perm)
        arr = r.to_array()
        dist, _ = _kernels_py.fw_apsp(arr)
        bound = 60
        roots = [v - 1 for v in choose_roots(r, bound, [])]
        eager = max(1, n // 3)
        call = lambda k: k.ctree_dfs(arr, dist, roots, bound, 10**7, eager, 0.0)  # noqa: E731
        tp, ref = best_of(lambda: call(_kernels_py), args.repeat)
        row = f"{'ctree_dfs':<10}{n:>5}{tp:>12.4f}"
        if compiled:
            tc, got = best_of(lambda: call(compiled), args.repeat)
            assert got == ref
            row += f"{tc:>12.4f}{tp / tc:>9.1f}"
        print(row + f"   nodes {ref[1]}")


if __name__ == "__main__":
    main()
