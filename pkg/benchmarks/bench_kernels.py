#!/usr/bin/env python3
"""Compare the pure-Python and compiled kernel backends on identical inputs.

Runs the exact closed-walk count table and the spectral radius kernel on
a small core and a larger random fold, with both backends, checking that
the answers agree while timing them.
"""

import argparse
import random
import statistics
import time

from stallings import fold, parse_word
from stallings.growth import two_core_edges
from stallings.kernels import edge_state_arrays
from stallings.words import Word
from stallings import _kernels_py

try:
    from stallings import _speedups
except ImportError:
    _speedups = None


def _random_graph(seed, rank, n_words, max_len):
    rng = random.Random(seed)
    gens = []
    for _ in range(n_words):
        letters = []
        for _ in range(rng.randint(2, max_len)):
            l = rng.choice([s * i for i in range(1, rank + 1) for s in (1, -1)])
            if letters and l == -letters[-1]:
                continue
            letters.append(l)
        if letters:
            gens.append(Word(letters))
    return fold(gens, rank)


def _time(func, repeat):
    times = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = func()
        times.append(time.perf_counter() - start)
    return result, min(times)


def bench_graph(label, graph, r_max, tol, repeat):
    arrs = edge_state_arrays(graph, two_core_edges(graph))
    n_states = len(arrs[0])
    print(f"{label}: {graph.vertex_count} vertices, {n_states} edge states")

    counts_pure, t_pure = _time(
        lambda: _kernels_py.closed_walk_counts(*arrs, graph.root, r_max), repeat
    )
    row = f"  counts to R={r_max}:   pure {t_pure * 1e3:9.2f} ms"
    if _speedups is not None:
        counts_fast, t_fast = _time(
            lambda: _speedups.closed_walk_counts(*arrs, graph.root, r_max), repeat
        )
        assert list(counts_fast) == list(counts_pure), "backend count mismatch"
        row += f"   compiled {t_fast * 1e3:9.2f} ms   speedup {t_pure / t_fast:6.1f}x"
    print(row)

    cap = 10 * n_states * 24 + 1000
    lam_pure, t_pure = _time(
        lambda: _kernels_py.nb_spectral_radius(*arrs, tol, cap), repeat
    )
    row = f"  spectral radius:     pure {t_pure * 1e3:9.2f} ms"
    if _speedups is not None:
        lam_fast, t_fast = _time(
            lambda: _speedups.nb_spectral_radius(*arrs, tol, cap), repeat
        )
        assert abs(lam_fast[0] - lam_pure[0]) < 1e-8, "backend eigenvalue mismatch"
        row += f"   compiled {t_fast * 1e3:9.2f} ms   speedup {t_pure / t_fast:6.1f}x"
    print(row)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rmax", type=int, default=400, help="count table depth")
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions, best kept")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    if _speedups is None:
        print("compiled extension not available; timing the pure backend only")

    small = fold(
        [parse_word("a1 a2 a1^-1", 2), parse_word("a1 a1 a1 a2 a2 a1^-1 a1^-1", 2)], 2
    )
    bench_graph("two-generator core", small, args.rmax, args.tol, args.repeat)

    large = _random_graph(args.seed, 3, 5, 24)
    bench_graph("random rank-3 fold", large, args.rmax, args.tol, args.repeat)


if __name__ == "__main__":
    main()
