"""Slow reference implementations the fast code is checked against.

Everything here favors obviousness over speed: explicit enumeration,
dense matrices, materialized balls.  Keep inputs small.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from stallings.core import CoreGraph
from stallings.growth import two_core_edges
from stallings.kernels import edge_state_arrays
from stallings.words import Word

LETTERS = lambda rank: [s * i for i in range(1, rank + 1) for s in (1, -1)]


def brute_reduced_words(rank: int, max_len: int):
    """All reduced words of length <= max_len, as letter tuples."""
    out = [()]
    layer = [()]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for l in LETTERS(rank):
                if w and l == -w[-1]:
                    continue
                nxt.append(w + (l,))
        out.extend(nxt)
        layer = nxt
    return out


def brute_member_set(graph: CoreGraph, max_len: int) -> set[tuple[int, ...]]:
    """Subgroup elements up to length max_len, by exhaustive membership."""
    return {
        w for w in brute_reduced_words(graph.rank, max_len) if graph.membership(Word(w))
    }


def brute_closed_walk_set(graph: CoreGraph, max_len: int) -> set[tuple[int, ...]]:
    """Subgroup elements up to max_len, by DFS over core-confined walks.

    A reduced word that leaves the core into a hanging tree can never
    come back, so elements are exactly the reduced words whose full
    trace stays inside the core and ends at the root.
    """
    found = {()}
    stack = [(graph.root, ())]
    while stack:
        v, w = stack.pop()
        if len(w) == max_len:
            continue
        for l in LETTERS(graph.rank):
            if w and l == -w[-1]:
                continue
            nxt = graph.step(v, l)
            if nxt is None:
                continue
            w2 = w + (l,)
            if nxt == graph.root:
                found.add(w2)
            stack.append((nxt, w2))
    return found


def brute_counts(graph: CoreGraph, r_max: int) -> list[int]:
    """Cumulative element counts c(0..r_max) by explicit enumeration."""
    by_len = [0] * (r_max + 1)
    for w in brute_closed_walk_set(graph, r_max):
        by_len[len(w)] += 1
    out = []
    total = 0
    for r in range(r_max + 1):
        total += by_len[r]
        out.append(total)
    return out


def dense_nb_matrix(graph: CoreGraph):
    """Dense non-backtracking 0/1 matrix of the 2-core, built edge by edge."""
    tails, heads, rev, _nv = edge_state_arrays(graph, two_core_edges(graph))
    n = len(tails)
    B = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            if heads[a] == tails[b] and b != rev[a]:
                B[b, a] = 1.0
    return B


def dense_delta(graph: CoreGraph) -> float:
    """Exact exponent via the full dense spectrum; 0 for cyclic cores."""
    if graph.free_rank <= 1:
        return 0.0
    ev = np.linalg.eigvals(dense_nb_matrix(graph))
    return math.log(float(ev.real.max()))


def schreier_step(graph: CoreGraph, node, letter):
    """One step in the synthesized full Schreier graph.

    Nodes are (core vertex, excursion tuple); every letter is readable
    everywhere because hanging trees complete the core to 2d-regular.
    """
    base, exc = node
    if exc:
        if letter == -exc[-1]:
            return (base, exc[:-1])
        return (base, exc + (letter,))
    nxt = graph.step(base, letter)
    if nxt is None:
        return (base, (letter,))
    return (nxt, ())


def materialized_ball(graph: CoreGraph, node, radius: int):
    """Canonical encoding of the induced Schreier ball around node.

    Radius 0 encodes as the empty tuple for every center, so single
    vertices are never distinguished by their induced loops.  For
    radius >= 1 the encoding walks the induced subgraph depth-first by
    letter order, which is canonical because the graph is
    deterministic.
    """
    if radius <= 0:
        return ()
    dist = {node: 0}
    frontier = deque([node])
    while frontier:
        cur = frontier.popleft()
        d = dist[cur]
        if d == radius:
            continue
        for l in LETTERS(graph.rank):
            nxt = schreier_step(graph, cur, l)
            if nxt not in dist:
                dist[nxt] = d + 1
                frontier.append(nxt)
    ids = {node: 0}
    order = deque([node])
    encoding = []
    while order:
        cur = order.popleft()
        row = []
        for l in LETTERS(graph.rank):
            nxt = schreier_step(graph, cur, l)
            if nxt not in dist:  # outside the ball
                row.append(None)
                continue
            if nxt not in ids:
                ids[nxt] = len(ids)
                order.append(nxt)
            row.append(ids[nxt])
        encoding.append(tuple(row))
    return tuple(encoding)


def bfs_encoding_from(graph: CoreGraph, root: int):
    """Canonical BFS encoding of the whole core ignoring the stored root."""
    ids = {root: 0}
    order = deque([root])
    rows = []
    while order:
        v = order.popleft()
        row = []
        for l in LETTERS(graph.rank):
            nxt = graph.step(v, l)
            if nxt is None:
                row.append(-1)
                continue
            if nxt not in ids:
                ids[nxt] = len(ids)
                order.append(nxt)
            row.append(ids[nxt])
        rows.append(tuple(row))
    return tuple(rows)


def unrooted_encoding(graph: CoreGraph):
    """Root-independent canonical form: minimum over all basepoints."""
    return min(bfs_encoding_from(graph, v) for v in range(graph.vertex_count))
