"""Connector gluing: the core of Gamma1 joined with a conjugated Gamma2.

A connector word g decomposes against the two cores as a prefix that
traces inside the first, a suffix whose inverse traces inside the
second, and a middle join segment.  When the join is nonempty the
subgroup generated by Gamma1 and g Gamma2 g^-1 is their free product,
and its core is the two cores wired together by a fresh join path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CoreGraph
from .words import RankError, Word

__all__ = [
    "ConnectorDecomposition",
    "NotAdmissibleError",
    "connector_decompose",
    "glue",
]


class NotAdmissibleError(ValueError):
    """The connector has no join segment left between the two cores."""

    def __init__(self, j1: int, j2: int, length: int):
        super().__init__(
            f"connector of length {length} is swallowed by the cores "
            f"(prefix trace {j1} + suffix trace {j2} >= {length})"
        )
        self.j1 = j1
        self.j2 = j2
        self.length = length


@dataclass(frozen=True)
class ConnectorDecomposition:
    """Split of an admissible connector g into prefix, join, suffix.

    j1 letters trace from the first root to u1; the inverse of the last
    j2 letters traces from the second root to u2; the j letters between
    them form the fresh join path.  j1 + j + j2 = len(g), j >= 1.
    """

    j1: int
    j: int
    j2: int
    u1: int
    u2: int
    join_word: Word


def connector_decompose(
    graph1: CoreGraph, graph2: CoreGraph, connector: Word
) -> ConnectorDecomposition:
    """Decompose a connector against two cores, or raise NotAdmissibleError."""
    if graph1.rank != graph2.rank:
        raise ValueError("ambient ranks differ")
    if not isinstance(connector, Word):
        connector = Word(connector)
    if connector.is_identity:
        raise ValueError("connector must be a nontrivial word")
    if connector.max_index > graph1.rank:
        raise RankError(
            f"connector {connector} exceeds ambient rank {graph1.rank}"
        )
    letters = connector.letters
    length = len(letters)

    j1 = 0
    u1 = graph1.root
    for letter in letters:
        nxt = graph1.step(u1, letter)
        if nxt is None:
            break
        u1 = nxt
        j1 += 1

    j2 = 0
    u2 = graph2.root
    for letter in reversed(letters):
        nxt = graph2.step(u2, -letter)
        if nxt is None:
            break
        u2 = nxt
        j2 += 1

    if j1 + j2 >= length:
        raise NotAdmissibleError(j1, j2, length)
    join = Word._raw(letters[j1 : length - j2])
    return ConnectorDecomposition(
        j1=j1, j=length - j1 - j2, j2=j2, u1=u1, u2=u2, join_word=join
    )


def glue(graph1: CoreGraph, graph2: CoreGraph, connector: Word) -> CoreGraph:
    """Core of the subgroup generated by Gamma1 and g Gamma2 g^-1.

    Wires a disjoint copy of the second core to the first along the
    connector's join path.  The join path attaches at slots that the
    maximal traces left unfilled, so no folding is ever needed; leaf
    trimming only fires when the second root hangs off its core on a
    tail that the suffix trace bypassed (or when a core is trivial).
    """
    dec = connector_decompose(graph1, graph2, connector)
    n1 = graph1.vertex_count
    succ: dict[int, dict[int, int]] = {}
    pred: dict[int, dict[int, int]] = {}
    for v in range(n1):
        succ[v] = {}
        pred[v] = {}
    for u, lab, v in graph1.edges():
        succ[u][lab] = v
        pred[v][lab] = u
    for v in range(graph2.vertex_count):
        succ[v + n1] = {}
        pred[v + n1] = {}
    for u, lab, v in graph2.edges():
        succ[u + n1][lab] = v + n1
        pred[v + n1][lab] = u + n1

    next_id = n1 + graph2.vertex_count
    cur = dec.u1
    join = dec.join_word.letters
    for idx, letter in enumerate(join):
        if idx == len(join) - 1:
            nxt = dec.u2 + n1
        else:
            nxt = next_id
            next_id += 1
            succ[nxt] = {}
            pred[nxt] = {}
        if letter > 0:
            assert letter not in succ[cur] and letter not in pred[nxt]
            succ[cur][letter] = nxt
            pred[nxt][letter] = cur
        else:
            assert -letter not in pred[cur] and -letter not in succ[nxt]
            succ[nxt][-letter] = cur
            pred[cur][-letter] = nxt
        cur = nxt

    _trim_leaves(succ, pred, graph1.root)
    return CoreGraph._from_maps(graph1.rank, succ, pred, graph1.root)


def _trim_leaves(succ: dict, pred: dict, root: int) -> None:
    """Iteratively remove non-root vertices of total valency <= 1."""
    def valency(v: int) -> int:
        return len(succ[v]) + len(pred[v])

    stack = [v for v in succ if v != root and valency(v) <= 1]
    while stack:
        v = stack.pop()
        if v not in succ or (len(succ[v]) + len(pred[v])) > 1 or v == root:
            continue
        neighbors = []
        for lab, w in succ[v].items():
            del pred[w][lab]
            neighbors.append(w)
        for lab, w in pred[v].items():
            del succ[w][lab]
            neighbors.append(w)
        del succ[v]
        del pred[v]
        for w in neighbors:
            if w != root and w in succ and valency(w) <= 1:
                stack.append(w)
