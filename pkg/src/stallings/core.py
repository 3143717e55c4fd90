"""Folded core graphs of finitely generated subgroups of a free group.

A core graph is a rooted, connected, edge-labeled digraph over labels
1..d that is deterministic and co-deterministic (at most one out-edge
and one in-edge per label at each vertex), with every non-root vertex
of total valency at least 2.  Vertex ids are canonical: breadth-first
order from the root, exploring at each vertex the slots a1 (out),
a1^-1 (in), a2, a2^-1, ... in that order.  Equal subgroups therefore
yield structurally identical graphs.

The full coset graph of the subgroup is this core with an infinite
(2d-1)-regular tree hanging off every unfilled slot; those trees are
never materialized, positions inside them are tracked as a
:class:`SchreierLocus` (core vertex plus reduced excursion word).
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple, Sequence

from .words import RankError, Word, free_reduce

__all__ = [
    "CoreGraph",
    "SchreierLocus",
    "fold",
    "balls_isomorphic",
    "balls_isomorphic_between",
]


class SchreierLocus(NamedTuple):
    """A position in the coset graph: a core vertex plus a tree excursion.

    ``excursion`` is a reduced word (tuple of letters); when nonempty its
    first letter must not be readable from ``base`` inside the core, so
    the locus genuinely sits in a hanging tree.
    """

    base: int
    excursion: tuple[int, ...] = ()


class CoreGraph:
    """Immutable folded core graph.  Build via :func:`fold` or JSON."""

    __slots__ = ("rank", "_succ", "_pred")

    rank: int
    _succ: tuple[tuple[int, ...], ...]
    _pred: tuple[tuple[int, ...], ...]

    root = 0

    def __init__(self, rank: int, succ: Sequence[Sequence[int]], pred: Sequence[Sequence[int]]):
        # internal: arrays must already be canonical; use fold()/from_json_dict()
        self.rank = rank
        self._succ = tuple(tuple(row) for row in succ)
        self._pred = tuple(tuple(row) for row in pred)

    # -- construction ---------------------------------------------------

    @classmethod
    def trivial(cls, rank: int) -> "CoreGraph":
        if rank < 1:
            raise RankError(f"ambient rank must be >= 1, got {rank}")
        empty = ((-1,) * rank,)
        return cls(rank, empty, empty)

    @classmethod
    def _from_maps(cls, rank: int, succ: dict, pred: dict, root) -> "CoreGraph":
        """Canonicalize adjacency dicts {vertex: {label: vertex}} into a graph."""
        order = {root: 0}
        queue = [root]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            sv = succ.get(v, {})
            pv = pred.get(v, {})
            for lab in range(1, rank + 1):
                for w in (sv.get(lab), pv.get(lab)):
                    if w is not None and w not in order:
                        order[w] = len(order)
                        queue.append(w)
        if len(order) != len(succ):
            raise ValueError("graph is not connected from the root")
        n = len(order)
        new_succ = [[-1] * rank for _ in range(n)]
        new_pred = [[-1] * rank for _ in range(n)]
        for v, sv in succ.items():
            for lab, w in sv.items():
                new_succ[order[v]][lab - 1] = order[w]
        for v, pv in pred.items():
            for lab, w in pv.items():
                new_pred[order[v]][lab - 1] = order[w]
        return cls(rank, new_succ, new_pred)

    # -- basic queries --------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self._succ)

    @property
    def edge_count(self) -> int:
        return sum(1 for row in self._succ for w in row if w >= 0)

    @property
    def free_rank(self) -> int:
        """First Betti number, the free rank of the subgroup."""
        return self.edge_count - self.vertex_count + 1

    def step(self, vertex: int, letter: int) -> int | None:
        """Follow one letter inside the core; None when the slot is empty."""
        if letter > 0:
            w = self._succ[vertex][letter - 1]
        else:
            w = self._pred[vertex][-letter - 1]
        return None if w < 0 else w

    def degree(self, vertex: int) -> int:
        """Total valency; a loop contributes 2."""
        return sum(1 for w in self._succ[vertex] if w >= 0) + sum(
            1 for w in self._pred[vertex] if w >= 0
        )

    def readable_letters(self, vertex: int) -> list[int]:
        """Letters with a filled slot at ``vertex``, in canonical order."""
        out = []
        for i in range(1, self.rank + 1):
            if self._succ[vertex][i - 1] >= 0:
                out.append(i)
            if self._pred[vertex][i - 1] >= 0:
                out.append(-i)
        return out

    def edges(self) -> list[tuple[int, int, int]]:
        """Positive-label edge list [(src, label, dst)] sorted by (src, label)."""
        out = []
        for v, row in enumerate(self._succ):
            for i, w in enumerate(row):
                if w >= 0:
                    out.append((v, i + 1, w))
        return out

    # -- tracing --------------------------------------------------------

    def trace_vertex(self, word: Iterable[int], start: int = 0) -> int | None:
        """Trace a word through the core only; None as soon as it exits."""
        v = start
        for letter in _letters_of(word):
            nxt = self.step(v, letter)
            if nxt is None:
                return None
            v = nxt
        return v

    def trace(self, word: Iterable[int], start: SchreierLocus | int | None = None) -> SchreierLocus:
        """Trace a reduced word through the full coset graph.

        Tree excursions are tracked exactly: steps into hanging trees
        push letters on the excursion, inverse steps pop them.
        """
        locus = self._as_locus(start if start is not None else SchreierLocus(0, ()))
        base, exc = locus.base, list(locus.excursion)
        for letter in _letters_of(word):
            if exc:
                if letter == -exc[-1]:
                    exc.pop()
                else:
                    exc.append(letter)
            else:
                nxt = self.step(base, letter)
                if nxt is None:
                    exc.append(letter)
                else:
                    base = nxt
        return SchreierLocus(base, tuple(exc))

    def membership(self, word: Iterable[int]) -> bool:
        """True iff the word traces a closed path at the root inside the core."""
        return self.trace_vertex(word, 0) == 0

    def __contains__(self, word) -> bool:
        return self.membership(word)

    def _as_locus(self, locus: SchreierLocus | int) -> SchreierLocus:
        if isinstance(locus, int):
            locus = SchreierLocus(locus, ())
        base, exc = locus
        if not (0 <= base < self.vertex_count):
            raise ValueError(f"locus base {base} is not a vertex")
        exc = tuple(exc)
        if exc:
            if free_reduce(exc) != exc:
                raise ValueError("locus excursion must be a reduced word")
            if self.step(base, exc[0]) is not None:
                raise ValueError("locus excursion must start outside the core")
        return SchreierLocus(base, exc)

    # -- metrics --------------------------------------------------------

    def distances_from(self, vertex: int) -> list[int]:
        """Undirected graph distances from a vertex to every vertex."""
        dist = [-1] * self.vertex_count
        dist[vertex] = 0
        queue = deque([vertex])
        while queue:
            v = queue.popleft()
            for row in (self._succ, self._pred):
                for w in row[v]:
                    if w >= 0 and dist[w] < 0:
                        dist[w] = dist[v] + 1
                        queue.append(w)
        return dist

    @property
    def radius(self) -> int:
        """Largest distance from the root to any vertex."""
        return max(self.distances_from(0))

    # -- subgroup generators -------------------------------------------

    def generating_set(self) -> list[Word]:
        """A free basis of the subgroup: one reduced word per non-tree edge.

        Uses the canonical BFS spanning tree; for a non-tree edge
        (u, l, v) the word reads root->u, the edge, then v->root.  The
        concatenation is automatically reduced because the tree is part
        of a folded graph.
        """
        n = self.vertex_count
        path: list[tuple[int, ...] | None] = [None] * n
        path[0] = ()
        tree_edges: set[tuple[int, int, int]] = set()
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for lab in range(1, self.rank + 1):
                for letter, w in ((lab, self.step(v, lab)), (-lab, self.step(v, -lab))):
                    if w is not None and path[w] is None:
                        path[w] = path[v] + (letter,)
                        if letter > 0:
                            tree_edges.add((v, letter, w))
                        else:
                            tree_edges.add((w, -letter, v))
                        queue.append(w)
        basis = []
        for u, lab, v in self.edges():
            if (u, lab, v) in tree_edges:
                continue
            letters = path[u] + (lab,) + tuple(-x for x in reversed(path[v]))
            word = Word(letters)
            assert len(word) == len(letters), "spanning-tree basis word failed to be reduced"
            basis.append(word)
        return basis

    # -- serialization --------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "rank": self.rank,
            "vertices": self.vertex_count,
            "root": 0,
            "edges": [list(e) for e in self.edges()],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CoreGraph":
        """Load a graph, validating foldedness, connectivity and minimality.

        The input numbering may be arbitrary; the result is canonical.
        """
        try:
            rank = int(data["rank"])
            n = int(data["vertices"])
            root = int(data["root"])
            edges = data["edges"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed graph object: {exc}") from None
        if rank < 1:
            raise RankError(f"ambient rank must be >= 1, got {rank}")
        if not (0 <= root < n) or n < 1:
            raise ValueError("root must be a vertex id")
        succ: dict[int, dict[int, int]] = {v: {} for v in range(n)}
        pred: dict[int, dict[int, int]] = {v: {} for v in range(n)}
        for e in edges:
            u, lab, v = (int(x) for x in e)
            if not (1 <= lab <= rank):
                raise ValueError(f"edge label {lab} outside 1..{rank}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge endpoint outside 0..{n - 1}")
            if lab in succ[u] or lab in pred[v]:
                raise ValueError("graph is not folded (duplicate slot)")
            succ[u][lab] = v
            pred[v][lab] = u
        graph = cls._from_maps(rank, succ, pred, root)
        bad = [
            v
            for v in range(graph.vertex_count)
            if v != 0 and graph.degree(v) < 2
        ]
        if bad:
            raise ValueError("not a core graph: non-root vertex of valency < 2")
        return graph

    def validate(self) -> None:
        """Re-check every structural invariant, including canonical numbering."""
        rebuilt = CoreGraph.from_json_dict(self.to_json_dict())
        if rebuilt.edges() != self.edges() or rebuilt.vertex_count != self.vertex_count:
            raise ValueError("vertex numbering is not canonical")

    # -- equality -------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoreGraph)
            and self.rank == other.rank
            and self._succ == other._succ
        )

    def __hash__(self) -> int:
        return hash((self.rank, self._succ))

    def __repr__(self) -> str:
        return (
            f"<CoreGraph rank={self.rank} vertices={self.vertex_count} "
            f"edges={self.edge_count} free_rank={self.free_rank}>"
        )

    # -- ball isomorphism ----------------------------------------------

    def balls_isomorphic(
        self,
        locus_a: SchreierLocus | int,
        locus_b: SchreierLocus | int,
        radius: int,
    ) -> bool:
        """True iff the coset-graph balls of the given radius around the two
        loci are isomorphic as rooted labeled digraphs."""
        return balls_isomorphic_between(self, locus_a, self, locus_b, radius)


def _letters_of(word) -> tuple[int, ...]:
    if isinstance(word, Word):
        return word.letters
    return tuple(word)


def fold(generators: Iterable[Word | Sequence[int]], rank: int) -> CoreGraph:
    """Fold a wedge of generator loops into the canonical core graph.

    Identification of same-label parallel edges is run to completion
    with a union-find worklist; reduced generators guarantee that no
    non-root vertex ends up with valency < 2, so no trimming is needed.
    The empty generating set gives the one-vertex trivial graph.
    """
    if rank < 1:
        raise RankError(f"ambient rank must be >= 1, got {rank}")
    words = []
    for g in generators:
        w = g if isinstance(g, Word) else Word(g)
        if w.max_index > rank:
            raise RankError(f"generator {w} exceeds ambient rank {rank}")
        if not w.is_identity:
            words.append(w)

    succ: dict[int, dict[int, int]] = {0: {}}
    pred: dict[int, dict[int, int]] = {0: {}}
    parent: dict[int, int] = {0: 0}
    pending: deque[tuple[int, int]] = deque()
    next_id = 1

    def find(v: int) -> int:
        r = v
        while parent[r] != r:
            r = parent[r]
        while parent[v] != r:
            parent[v], v = r, parent[v]
        return r

    def add_edge(u: int, lab: int, v: int) -> None:
        u, v = find(u), find(v)
        su, pv = succ[u], pred[v]
        if lab in su:
            if find(su[lab]) != v:
                pending.append((su[lab], v))
            elif lab not in pv:
                pv[lab] = u  # keep the slot pair complete
        elif lab in pv:
            if find(pv[lab]) != u:
                pending.append((pv[lab], u))
            else:
                su[lab] = v
        else:
            su[lab] = v
            pv[lab] = u

    for w in words:
        prev = 0
        for pos, letter in enumerate(w.letters):
            if pos == len(w) - 1:
                nxt = 0
            else:
                nxt = next_id
                next_id += 1
                succ[nxt] = {}
                pred[nxt] = {}
                parent[nxt] = nxt
            if letter > 0:
                add_edge(prev, letter, nxt)
            else:
                add_edge(nxt, -letter, prev)
            prev = nxt
        while pending:
            a, b = pending.popleft()
            a, b = find(a), find(b)
            if a == b:
                continue
            if len(succ[a]) + len(pred[a]) < len(succ[b]) + len(pred[b]):
                a, b = b, a
            parent[b] = a
            sb, pb = succ.pop(b), pred.pop(b)
            for lab, w2 in sb.items():
                sa = succ[a]
                if lab in sa:
                    if find(sa[lab]) != find(w2):
                        pending.append((sa[lab], w2))
                else:
                    sa[lab] = w2
            for lab, w2 in pb.items():
                pa = pred[a]
                if lab in pa:
                    if find(pa[lab]) != find(w2):
                        pending.append((pa[lab], w2))
                else:
                    pa[lab] = w2

    # normalize adjacency onto representatives
    clean_succ: dict[int, dict[int, int]] = {}
    clean_pred: dict[int, dict[int, int]] = {}
    for v in succ:
        r = find(v)
        clean_succ[r] = {lab: find(w) for lab, w in succ[v].items()}
        clean_pred[r] = {lab: find(w) for lab, w in pred[v].items()}
    return CoreGraph._from_maps(rank, clean_succ, clean_pred, find(0))


# -- rooted ball comparison --------------------------------------------


def balls_isomorphic_between(
    graph_a: CoreGraph,
    locus_a: SchreierLocus | int,
    graph_b: CoreGraph,
    locus_b: SchreierLocus | int,
    radius: int,
) -> bool:
    """Compare coset-graph balls around loci of two graphs of equal rank.

    Labeled coset graphs admit at most one root-respecting isomorphism,
    so the comparison checks whether the map forced by reading equal
    words off both roots is well defined in both directions.  The check
    runs over non-backtracking walk states on the cores (plus the
    explicit excursion spines), never over the exponentially large balls
    themselves: reduced walks cannot return from a hanging tree, so
    every vertex coincidence inside a ball is witnessed at core level.
    """
    if graph_a.rank != graph_b.rank:
        raise ValueError("ambient ranks differ")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    la = graph_a._as_locus(locus_a)
    lb = graph_b._as_locus(locus_b)
    if radius == 0:
        return True
    return _forced_map_consistent(graph_a, la, graph_b, lb, radius) and _forced_map_consistent(
        graph_b, lb, graph_a, la, radius
    )


def _spine_step(graph: CoreGraph, locus: SchreierLocus, vertex: int, letter: int) -> int | None:
    """Step inside the core augmented with the start locus' excursion spine.

    Spine vertices get ids n, n+1, ... for excursion prefixes of length
    1, 2, ...; None means the step leaves the augmented core (descends
    into a tree that carries no further relations).
    """
    n = graph.vertex_count
    exc = locus.excursion
    if vertex < n:
        if exc and vertex == locus.base and letter == exc[0]:
            return n
        return graph.step(vertex, letter)
    j = vertex - n  # sits at excursion prefix exc[: j + 1]
    if letter == -exc[j]:
        return locus.base if j == 0 else vertex - 1
    if j + 1 < len(exc) and letter == exc[j + 1]:
        return vertex + 1
    return None


def _locus_step(graph: CoreGraph, locus: SchreierLocus, letter: int) -> SchreierLocus:
    base, exc = locus
    if exc:
        if letter == -exc[-1]:
            return SchreierLocus(base, exc[:-1])
        return SchreierLocus(base, exc + (letter,))
    nxt = graph.step(base, letter)
    if nxt is None:
        return SchreierLocus(base, (letter,))
    return SchreierLocus(nxt, ())


def _forced_map_consistent(
    graph_a: CoreGraph,
    locus_a: SchreierLocus,
    graph_b: CoreGraph,
    locus_b: SchreierLocus,
    radius: int,
) -> bool:
    """One direction of the ball comparison.

    BFS over non-backtracking walk states on graph_a's augmented core,
    assigning to each touched vertex the locus reached in graph_b by the
    same word, and rejecting on any disagreement.  States at the boundary
    depth only verify already-assigned images, which matches comparing
    the balls as induced subgraphs.
    """
    rank = graph_a.rank
    letters = [x for i in range(1, rank + 1) for x in (i, -i)]
    start = (
        graph_a.vertex_count + len(locus_a.excursion) - 1
        if locus_a.excursion
        else locus_a.base
    )
    image: dict[int, SchreierLocus] = {start: locus_b}
    seen = {(start, 0)}
    queue: deque[tuple[int, int, int]] = deque([(start, 0, 0)])
    while queue:
        vertex, last, depth = queue.popleft()
        here = image[vertex]
        for letter in letters:
            if letter == -last:
                continue
            nxt = _spine_step(graph_a, locus_a, vertex, letter)
            if nxt is None:
                continue
            target = _locus_step(graph_b, here, letter)
            known = image.get(nxt)
            if known is not None:
                if known != target:
                    return False
            elif depth < radius:
                image[nxt] = target
            else:
                continue
            if depth < radius and (nxt, letter) not in seen:
                seen.add((nxt, letter))
                queue.append((nxt, letter, depth + 1))
    return True


def balls_isomorphic(
    graph: CoreGraph,
    locus_a: SchreierLocus | int,
    locus_b: SchreierLocus | int,
    radius: int,
) -> bool:
    """Ball comparison around two loci of the same graph."""
    return balls_isomorphic_between(graph, locus_a, graph, locus_b, radius)
