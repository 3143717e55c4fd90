"""Towers of subgroups with finite-depth recurrence certificates.

Each stage takes a word g from a fixed enumeration and either proves
that some power of g already normalizes into the current subgroup (the
orbit of the traced powers is finite: nothing to do) or glues the
current core to a conjugated copy of itself along the connector g^m,
with m chosen large enough that the exponent increment stays inside a
geometric budget and every ball the construction promised so far is
provably untouched.  The promise per glued stage is a certificate: the
ball of radius r_guarantee around the trace of g^m is isomorphic to
the ball around the root, and stays so in all later stages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .core import (
    CoreGraph,
    balls_isomorphic,
    balls_isomorphic_between,
)
from .gluing import NotAdmissibleError, connector_decompose, glue
from .growth import (
    ConvergenceError,
    _dense_spectral_delta,
    _spectral_delta,
    _subspace_delta,
)
from .words import RankError, Word, iter_reduced_words

__all__ = [
    "ConstructionError",
    "StageRecord",
    "ConstructionState",
    "initial_state",
    "has_finite_power_orbit",
    "construct_stage",
    "construct",
    "verify_certificates",
]

DEFAULT_M_CAP = 2**20


class ConstructionError(RuntimeError):
    """A stage could not satisfy its constraints within the search cap."""


@dataclass(frozen=True)
class StageRecord:
    """Transcript entry for one stage; doubles as the stage certificate.

    For a glued stage the certificate claim is that the ball of radius
    r_guarantee around the trace of word**m is isomorphic to the root
    ball, in the stage's own core and in every later one.  locus_base
    and locus_excursion record where that trace landed when the stage
    ran (vertex ids are stage-local; verification re-traces).
    """

    stage: int
    word: Word
    skipped: bool
    m: int | None
    connector_length: int | None
    j1: int | None
    j: int | None
    j2: int | None
    r_guarantee: int
    budget: float
    delta_before: float
    delta_after: float
    delta_increment: float
    locus_base: int | None
    locus_excursion: tuple[int, ...] | None

    def to_json_dict(self) -> dict:
        out = {
            "stage": self.stage,
            "word": str(self.word),
            "skipped": self.skipped,
            "r_guarantee": self.r_guarantee,
            "budget": self.budget,
            "delta_before": self.delta_before,
            "delta_after": self.delta_after,
            "delta_increment": self.delta_increment,
        }
        if not self.skipped:
            out["m"] = self.m
            out["connector_length"] = self.connector_length
            out["j1"] = self.j1
            out["j"] = self.j
            out["j2"] = self.j2
            out["locus"] = {
                "base": self.locus_base,
                "excursion": list(self.locus_excursion),
            }
        return out


@dataclass(frozen=True)
class ConstructionState:
    """Immutable tower state after some number of stages."""

    rank: int
    gamma0: CoreGraph
    gamma: CoreGraph
    eps: float
    neighborhood_radius: int
    tol: float
    delta0: float
    delta: float
    history: tuple[StageRecord, ...] = ()

    @property
    def stage(self) -> int:
        return len(self.history)

    @property
    def radius(self) -> int:
        return self.gamma.radius

    def to_json_dict(self) -> dict:
        return {
            "rank": self.rank,
            "eps": self.eps,
            "stages": self.stage,
            "neighborhood_radius": self.neighborhood_radius,
            "tol": self.tol,
            "delta_initial": self.delta0,
            "delta_final": self.delta,
            "final_rank": self.gamma.free_rank,
            "radius": self.gamma.radius,
            "history": [rec.to_json_dict() for rec in self.history],
            "final_graph": self.gamma.to_json_dict(),
        }


def initial_state(
    gamma0: CoreGraph,
    eps: float,
    neighborhood_radius: int = 0,
    tol: float = 1e-10,
) -> ConstructionState:
    """Stage-0 state around a starting core."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if neighborhood_radius < 0:
        raise ValueError("neighborhood_radius must be >= 0")
    if tol <= 0:
        raise ValueError("tol must be positive")
    delta0 = _measure_delta(gamma0, tol)
    return ConstructionState(
        rank=gamma0.rank,
        gamma0=gamma0,
        gamma=gamma0,
        eps=eps,
        neighborhood_radius=neighborhood_radius,
        tol=tol,
        delta0=delta0,
        delta=delta0,
    )


def _measure_delta(graph: CoreGraph, tol: float) -> float:
    # Twin-copy glues give a near-degenerate leading pair that stalls
    # power iteration; the dense fallback settles the small cores
    # exactly and the two-vector iteration covers the rest.
    if graph.free_rank <= 1:
        return 0.0
    try:
        return _spectral_delta(graph, tol)
    except ConvergenceError:
        try:
            return _dense_spectral_delta(graph)
        except ConvergenceError:
            return _subspace_delta(graph, tol)


def has_finite_power_orbit(word: Word, graph: CoreGraph) -> bool:
    """True iff the traces of word^n, n >= 1, visit finitely many spots.

    Equivalent to some positive power of the word being a member after
    conjugation bookkeeping.  Decided exactly: write word = h c h^-1
    with c cyclically reduced; the orbit is finite iff h traces inside
    the core and iterating the c-trace returns to its start before
    leaving the core.  The c-trace is a partial injection, so the first
    repeated vertex can only be the starting one, and vertex_count
    iterations decide.
    """
    if not isinstance(word, Word):
        word = Word(word)
    if word.is_identity:
        raise ValueError("word must be nontrivial")
    core, conj = word.cyclic_reduce()
    start = graph.trace_vertex(conj, graph.root)
    if start is None:
        return False
    x = start
    for _ in range(graph.vertex_count):
        x = graph.trace_vertex(core, x)
        if x is None:
            return False
        if x == start:
            return True
    raise RuntimeError("orbit of an injective partial map failed to close")


def _stage_guard(state: ConstructionState) -> int:
    """Minimum join length (exclusive) protecting every promised ball.

    A join path longer than r is indistinguishable, within any ball of
    radius r around pre-existing material, from the hanging tree it
    displaces.  The guard therefore covers the configured neighborhood
    radius, the current core radius (the new certificate's own ball),
    and every earlier certificate's radius padded by its locus' tree
    excursion (a later join can re-route that excursion into itself).
    """
    guard = max(state.neighborhood_radius, state.gamma.radius)
    for rec in state.history:
        if not rec.skipped:
            guard = max(guard, rec.r_guarantee + len(rec.locus_excursion))
    return guard


def _power_length(word: Word, m: int) -> int:
    core, conj = word.cyclic_reduce()
    return 2 * len(conj) + m * len(core)


def _skip_record(state: ConstructionState, word: Word, budget: float) -> StageRecord:
    return StageRecord(
        stage=state.stage + 1,
        word=word,
        skipped=True,
        m=None,
        connector_length=None,
        j1=None,
        j=None,
        j2=None,
        r_guarantee=state.gamma.radius,
        budget=budget,
        delta_before=state.delta,
        delta_after=state.delta,
        delta_increment=0.0,
        locus_base=None,
        locus_excursion=None,
    )


def _accept_stage(
    state: ConstructionState,
    word: Word,
    budget: float,
    m: int,
    connector: Word,
    dec,
    candidate: CoreGraph,
    delta_after: float,
) -> ConstructionState:
    r_prev = state.gamma.radius
    locus = candidate.trace(connector)
    if not balls_isomorphic(candidate, candidate.root, locus, r_prev):
        raise ConstructionError(
            f"stage {state.stage + 1}: certificate ball check failed at creation"
        )
    if not balls_isomorphic_between(
        candidate,
        candidate.root,
        state.gamma0,
        state.gamma0.root,
        state.neighborhood_radius,
    ):
        raise ConstructionError(
            f"stage {state.stage + 1}: neighborhood ball of radius "
            f"{state.neighborhood_radius} was not preserved"
        )
    record = StageRecord(
        stage=state.stage + 1,
        word=word,
        skipped=False,
        m=m,
        connector_length=len(connector),
        j1=dec.j1,
        j=dec.j,
        j2=dec.j2,
        r_guarantee=r_prev,
        budget=budget,
        delta_before=state.delta,
        delta_after=delta_after,
        delta_increment=delta_after - state.delta,
        locus_base=locus.base,
        locus_excursion=locus.excursion,
    )
    return replace(
        state,
        gamma=candidate,
        delta=delta_after,
        history=state.history + (record,),
    )


def _run_stage(
    state: ConstructionState, word: Word, budget: float, m_cap: int
) -> ConstructionState:
    if not isinstance(word, Word):
        word = Word(word)
    if word.is_identity:
        raise ValueError("stage word must be nontrivial")
    if word.max_index > state.rank:
        raise RankError(f"stage word {word} exceeds ambient rank {state.rank}")
    if budget <= 0:
        raise ValueError("stage budget must be positive")
    if has_finite_power_orbit(word, state.gamma):
        return replace(state, history=state.history + (_skip_record(state, word, budget),))

    gamma = state.gamma
    guard = _stage_guard(state)
    r_prev = gamma.radius

    m = 1
    found = None
    while m <= m_cap:
        if _power_length(word, m) > 2 * r_prev:
            try:
                dec = connector_decompose(gamma, gamma, word**m)
            except NotAdmissibleError:
                dec = None
            if dec is not None and dec.j > guard:
                found = m
                break
        m += 1
    if found is None:
        raise ConstructionError(
            f"stage {state.stage + 1}: no admissible connector with join > {guard} "
            f"found for {word} up to m = {m_cap}"
        )

    m = found
    best_increment = math.inf
    while m <= m_cap:
        connector = word**m
        dec = connector_decompose(gamma, gamma, connector)
        candidate = glue(gamma, gamma, connector)
        delta_after = _measure_delta(candidate, state.tol)
        increment = delta_after - state.delta
        if increment < budget:
            return _accept_stage(
                state, word, budget, m, connector, dec, candidate, delta_after
            )
        best_increment = min(best_increment, increment)
        m *= 2
    raise ConstructionError(
        f"stage {state.stage + 1}: exponent increment stayed >= budget "
        f"{budget:.3e} up to m = {m_cap}; best increment {best_increment:.3e}"
    )


def construct_stage(
    state: ConstructionState, word: Word, budget: float, m_cap: int = DEFAULT_M_CAP
) -> ConstructionState:
    """One tower stage on a non-cyclic state.

    Cyclic and trivial states need the bootstrap that only the
    ``construct`` driver performs; they are rejected here.
    """
    if state.gamma.free_rank <= 1:
        raise ValueError(
            "stage operation needs a non-cyclic, nontrivial subgroup; "
            "run the construct driver, which bootstraps first"
        )
    return _run_stage(state, word, budget, m_cap)


def _bootstrap_letter(graph: CoreGraph) -> int | None:
    """A generator index unreadable in both directions at the root."""
    for i in range(1, graph.rank + 1):
        if graph.step(graph.root, i) is None and graph.step(graph.root, -i) is None:
            return i
    return None


def _bootstrap_stage(
    state: ConstructionState, letter: int, budget: float, m_cap: int
) -> ConstructionState:
    """First stage for a cyclic start: glue along a fresh-letter power.

    The connector x^N with x unreadable at the root in both directions
    has empty prefix and suffix traces, so the glue is a clean join of
    two copies of the cycle.  N is a multiple of the generator length,
    sized so the exponent bound 1/(len * sqrt(N)) meets the budget,
    then doubled until the measured exponent actually does.
    """
    gamma = state.gamma
    generator = gamma.generating_set()[0]
    glen = len(generator)
    guard = _stage_guard(state)
    r_prev = gamma.radius
    word = Word((letter,))

    n = max(
        math.ceil((1.0 / (budget * glen)) ** 2),
        2 * r_prev + 1,
        guard + 1,
    )
    n = ((n + glen - 1) // glen) * glen

    best_increment = math.inf
    while n <= m_cap:
        connector = word**n
        dec = connector_decompose(gamma, gamma, connector)
        assert dec.j1 == 0 and dec.j2 == 0, "bootstrap letter traced unexpectedly"
        candidate = glue(gamma, gamma, connector)
        delta_after = _measure_delta(candidate, state.tol)
        increment = delta_after - state.delta
        if increment < budget:
            return _accept_stage(
                state, word, budget, n, connector, dec, candidate, delta_after
            )
        best_increment = min(best_increment, increment)
        n *= 2
    raise ConstructionError(
        f"bootstrap: exponent stayed >= budget {budget:.3e} up to join length "
        f"{m_cap}; best increment {best_increment:.3e}"
    )


def construct(
    gamma0: CoreGraph,
    eps: float,
    stages: int,
    neighborhood_radius: int = 0,
    *,
    tol: float = 1e-10,
    m_cap: int = DEFAULT_M_CAP,
) -> ConstructionState:
    """Run the staged construction from gamma0.

    Stage n (1-based) draws the n-th word from the deterministic
    enumeration and receives budget eps/2^n; skipped stages consume
    their index but no budget.  Cyclic starts are bootstrapped at stage
    1 by a fresh-letter glue when such a letter exists (otherwise the
    plain staged loop performs the first glue).  Trivial and
    finite-index starts return unchanged: there is nothing to build.
    """
    if stages < 1:
        raise ValueError("stages must be >= 1")
    state = initial_state(gamma0, eps, neighborhood_radius, tol)
    if gamma0.free_rank == 0:
        return state
    if gamma0.edge_count == gamma0.vertex_count * gamma0.rank:
        return state  # finite index: every slot filled
    words = iter_reduced_words(gamma0.rank)
    first_stage = 1
    if gamma0.free_rank == 1:
        letter = _bootstrap_letter(gamma0)
        if letter is not None:
            state = _bootstrap_stage(state, letter, eps / 2.0, m_cap)
            first_stage = 2
    for n in range(first_stage, stages + 1):
        word = next(words)
        state = _run_stage(state, word, eps / 2.0**n, m_cap)
    return state


def verify_certificates(state: ConstructionState, depth: int | None = None) -> dict:
    """Re-check every certificate up to ``depth`` against the final core.

    Skipped stages pass vacuously.  For a glued stage the connector is
    re-raised to its power, re-traced in the final core, and the
    promised ball isomorphism, the length condition, the budget ledger
    and exponent monotonicity are all re-checked.  Failures are
    reported per record, never thrown.
    """
    if depth is None:
        depth = len(state.history)
    if depth < 0 or depth > len(state.history):
        raise ValueError("depth must be between 0 and the stage count")
    final = state.gamma
    rows = []
    all_passed = True
    for rec in state.history[:depth]:
        if rec.skipped:
            rows.append(
                {
                    "stage": rec.stage,
                    "word": str(rec.word),
                    "skipped": True,
                    "passed": True,
                }
            )
            continue
        connector = rec.word**rec.m
        locus = final.trace(connector)
        ball_ok = balls_isomorphic(final, final.root, locus, rec.r_guarantee)
        length_ok = len(connector) > 2 * rec.r_guarantee
        budget_ok = rec.delta_increment < rec.budget
        monotone_ok = rec.delta_after >= rec.delta_before - 1e-9
        passed = ball_ok and length_ok and budget_ok and monotone_ok
        all_passed = all_passed and passed
        rows.append(
            {
                "stage": rec.stage,
                "word": str(rec.word),
                "skipped": False,
                "m": rec.m,
                "r_guarantee": rec.r_guarantee,
                "ball_isomorphic": ball_ok,
                "length_condition": length_ok,
                "budget_respected": budget_ok,
                "delta_monotone": monotone_ok,
                "passed": passed,
            }
        )
    return {"records": rows, "all_passed": all_passed}
