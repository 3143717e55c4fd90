"""Pure Python numeric backend.

Two kernels operate on a directed-edge-state encoding of a graph:
``closed_walk_counts`` counts non-backtracking closed walks exactly
(int64 vectorized phase, promoting to Python big integers before any
overflow) and ``nb_spectral_radius`` estimates the Perron value of the
non-backtracking transition matrix by float64 power iteration.

The compiled backend in ``_speedups`` mirrors both signatures; the
big-integer continuation below is shared by both.
"""

from __future__ import annotations

import numpy as np

__all__ = ["closed_walk_counts", "nb_spectral_radius"]


def closed_walk_counts(tails, heads, rev, n_vertices, root, r_max):
    """Exact counts of non-backtracking closed walks at ``root``.

    Returns [a(1), ..., a(r_max)] where a(L) is the number of reduced
    words of length L whose trace is a closed path at the root.  State
    L-step counts f[e] index walks ending with directed edge e; the
    recurrence f'[e] = vsum[tail(e)] - f[rev(e)] enforces the
    non-backtracking constraint.
    """
    r_max = int(r_max)
    if r_max <= 0:
        return []
    n_states = len(tails)
    if n_states == 0:
        return [0] * r_max
    tails = np.ascontiguousarray(tails, dtype=np.int64)
    heads = np.ascontiguousarray(heads, dtype=np.int64)
    rev = np.ascontiguousarray(rev, dtype=np.int64)
    maxdeg = int(np.bincount(heads, minlength=n_vertices).max())
    limit = (1 << 62) // max(maxdeg, 2)
    out: list[int] = []
    f = (tails == root).astype(np.int64)
    for step in range(1, r_max + 1):
        if int(f.max()) > limit:
            return _bigint_continue(
                [int(x) for x in f], tails, heads, rev, n_vertices, root, out, r_max
            )
        vsum = np.zeros(n_vertices, dtype=np.int64)
        np.add.at(vsum, heads, f)
        out.append(int(vsum[root]))
        if step < r_max:
            f = vsum[tails] - f[rev]
    return out


def _bigint_continue(f, tails, heads, rev, n_vertices, root, out, r_max):
    """Arbitrary-precision tail of the walk-count recurrence."""
    tails_l = [int(x) for x in tails]
    heads_l = [int(x) for x in heads]
    rev_l = [int(x) for x in rev]
    for step in range(len(out) + 1, r_max + 1):
        vsum = [0] * n_vertices
        for i, h in enumerate(heads_l):
            vsum[h] += f[i]
        out.append(vsum[root])
        if step < r_max:
            f = [vsum[t] - f[r] for t, r in zip(tails_l, rev_l)]
    return out


def nb_spectral_radius(tails, heads, rev, n_vertices, tol, max_iter):
    """Power iteration for the non-backtracking Perron value.

    Iterates with the +I shift (kills period-2 oscillation on
    bipartite-like state graphs).  Returns (lam, residual, iterations,
    converged); converged means the sup-norm eigen-residual of the
    unshifted matrix dropped to tol with the iterate normalized to
    sup-norm 1.
    """
    n_states = len(tails)
    if n_states == 0:
        return 0.0, 0.0, 0, True
    tails = np.ascontiguousarray(tails, dtype=np.int64)
    heads = np.ascontiguousarray(heads, dtype=np.int64)
    rev = np.ascontiguousarray(rev, dtype=np.int64)
    x = np.ones(n_states, dtype=np.float64)
    lam = 0.0
    residual = float("inf")
    for it in range(1, int(max_iter) + 1):
        vsum = np.bincount(heads, weights=x, minlength=n_vertices)
        bx = vsum[tails] - x[rev]
        y = bx + x
        norm = float(y.max())  # >= 1 since y >= x and max(x) = 1
        lam = norm - 1.0
        residual = float(np.abs(bx - lam * x).max())
        if residual <= tol:
            return lam, residual, it, True
        x = y / norm
    return lam, residual, int(max_iter), False
