#!/usr/bin/env python3
"""Benchmark the jitted hot kernels against the pure-Python fallbacks.

The two backends implement identical algorithms (dense-set search for the
census, J-anchor detection for threshold scans); this script measures both
on the same reproducible G(n, p) batches and prints a comparison table.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --trials 40 --seed 7
    ANTIRAINBOW_BACKEND=python antirainbow scan ...   # force the fallback
"""

import argparse
import time

from antirainbow import _kernels_python as pyimpl
from antirainbow.experiments import gnp
from antirainbow.kernels import _two_words, backend_name

try:
    from antirainbow import _kernels_numba as nbimpl
except ImportError:
    nbimpl = None


def bench_census(n, c, trials, seed):
    p = n ** -c
    graphs = [gnp(n, p, seed, stream=t) for t in range(trials)]
    words = [_two_words(g) for g in graphs]

    if nbimpl is not None:
        # warm the JIT before timing
        nbimpl.kernel_search(*words[0], graphs[0].n, 12, 15, 7, 3, 10**9)
        t0 = time.perf_counter()
        hits = 0
        for g, (a0, a1) in zip(graphs, words):
            _, _, _, st = nbimpl.kernel_search(a0, a1, g.n, 12, 15, 7, 3, 10**9)
            hits += st == 1
        t_fast = time.perf_counter() - t0
    else:
        t_fast, hits = float("nan"), None

    t0 = time.perf_counter()
    hits_py = 0
    for g in graphs:
        _, _, st = pyimpl.kernel_search(list(g.adj), g.n, 12, 15, 7, 3, 10**9)
        hits_py += st == 1
    t_py = time.perf_counter() - t0
    if hits is not None:
        assert hits == hits_py, "backends disagree"
    return t_fast, t_py, hits_py


def bench_j_anchor(n, c, trials, seed):
    p = n ** -c
    graphs = [gnp(n, p, seed, stream=100 + t) for t in range(trials)]
    words = [_two_words(g) for g in graphs]

    if nbimpl is not None:
        nbimpl.j_anchor_present(*words[0], graphs[0].n, 4)
        t0 = time.perf_counter()
        hits = sum(
            bool(nbimpl.j_anchor_present(a0, a1, g.n, 4))
            for g, (a0, a1) in zip(graphs, words)
        )
        t_fast = time.perf_counter() - t0
    else:
        t_fast, hits = float("nan"), None

    t0 = time.perf_counter()
    hits_py = sum(pyimpl.j_anchor_present(list(g.adj), g.n, 4) for g in graphs)
    t_py = time.perf_counter() - t0
    if hits is not None:
        assert hits == hits_py, "backends disagree"
    return t_fast, t_py, hits_py


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    print(f"active backend: {backend_name()}  (numba available: {nbimpl is not None})")
    print(f"{'kernel':<28}{'numba':>10}{'python':>10}{'speedup':>9}  hits")
    rows = [
        ("census search G(40,40^-.6)", bench_census(40, 0.6, args.trials, args.seed)),
        ("census search G(63,63^-.6)", bench_census(63, 0.6, max(args.trials // 3, 3), args.seed)),
        ("J-anchor G(100,100^-.45)", bench_j_anchor(100, 0.45, args.trials, args.seed)),
        ("J-anchor G(100,100^-.35)", bench_j_anchor(100, 0.35, args.trials, args.seed)),
    ]
    for name, (t_fast, t_py, hits) in rows:
        speed = t_py / t_fast if t_fast and t_fast == t_fast else float("nan")
        print(f"{name:<28}{t_fast:>9.3f}s{t_py:>9.3f}s{speed:>8.1f}x  {hits}")


if __name__ == "__main__":
    main()
