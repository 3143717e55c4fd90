"""End-to-end acceptance gate.

Ten criteria, one test each, run in order; every test prints a single
pass line once its assertions hold.
"""

import math
import random

import pytest

from stallings import fold, parse_word
from stallings.core import balls_isomorphic_between
from stallings.gluing import NotAdmissibleError, connector_decompose, glue
from stallings.growth import (
    coornaert_constant,
    cr_estimate_rhs,
    critical_exponent,
    cycle_counts,
    kwon_park,
)
from stallings.tower import construct, verify_certificates
from stallings.words import Word

from oracles import brute_closed_walk_set, brute_member_set, dense_delta

FIG1_GENS = [parse_word("a1 a2 a1^-1", 2), parse_word("a1 a1 a1 a2 a2 a1^-1 a1^-1", 2)]
FIG1 = fold(FIG1_GENS, 2)


def _report(num, label):
    print(f"criterion {num:2d} PASS  {label}")


def _random_word(rng, rank, length):
    letters = []
    for _ in range(length):
        l = rng.choice([s * i for i in range(1, rank + 1) for s in (1, -1)])
        if letters and l == -letters[-1]:
            continue
        letters.append(l)
    return Word(letters)


def _random_core(rng, rank, n_gens, max_len):
    gens = [_random_word(rng, rank, rng.randint(1, max_len)) for _ in range(n_gens)]
    gens = [g for g in gens if not g.is_identity]
    return fold(gens or [Word((1,))], rank)


def test_01_two_generator_core_reproduced_exactly():
    assert FIG1.vertex_count == 5
    assert FIG1.edge_count == 6
    assert FIG1.free_rank == 2
    assert FIG1.edges() == [(0, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 3), (3, 2, 4), (4, 2, 2)]
    _report(1, "two-generator core reproduced exactly (5 vertices, 6 edges, rank 2)")


def test_02_cyclic_count_formula():
    for text in ("a1", "a1 a2", "a1 a2 a1 a2^-1"):
        w = parse_word(text, 2)
        graph = fold([w], 2)
        want = [2 * (r // len(w)) + 1 for r in range(31)]
        assert cycle_counts(graph, 30) == want
    _report(2, "cyclic cores count 2*floor(R/len)+1 exactly through R=30")


def test_03_full_group_exponent():
    for d in (2, 3, 4):
        bouquet = fold([Word((i,)) for i in range(1, d + 1)], d)
        est = critical_exponent(bouquet, dp_rmax=60)
        assert abs(est.delta - math.log(2 * d - 1)) <= 1e-6
        assert est.method_agreement <= 1e-3
    _report(3, "bouquet exponent ln(2d-1) to 1e-6, methods agree to 1e-3 at R=60")


def test_04_polynomial_roots_and_two_loop_glue():
    for n in range(2, 13):
        x = kwon_park(n).root
        assert math.exp(-1 / math.sqrt(n)) <= x <= math.exp(-1 / n)
    loop = fold([Word((1,))], 2)
    for n in range(2, 13):
        barbell = glue(loop, loop, Word((2,)) ** (n - 1))
        delta = critical_exponent(barbell).delta
        assert abs(delta - kwon_park(n).delta) <= 1e-6
    _report(4, "root bounds for n in [2,12]; glued two-loop exponents match ln(1/x_n) to 1e-6")


def test_05_counting_bound_on_random_glues():
    rng = random.Random(77)
    done = 0
    violations = 0
    while done < 20:
        rank = rng.choice([2, 3])
        core = _random_core(rng, rank, rng.randint(1, 3), 5)
        if core.vertex_count > 8 or core.free_rank < 1:
            continue
        conn = _random_word(rng, rank, rng.randint(1, 6))
        if conn.is_identity:
            continue
        try:
            dec = connector_decompose(core, core, conn)
        except NotAdmissibleError:
            continue
        radius = rng.randint(2, 12)
        glued = glue(core, core, conn)
        lhs = cycle_counts(glued, radius)[radius]
        need = radius + 2 * (radius // (2 * dec.j)) * max(0, len(conn) - 2 * dec.j)
        rhs = cr_estimate_rhs(cycle_counts(core, need), len(conn), dec.j, radius)
        if lhs > rhs:
            violations += 1
        done += 1
    assert violations == 0
    _report(5, "20 random glues stay under the counting bound (0 violations)")


def test_06_glue_agrees_with_fold_oracle():
    rng = random.Random(660)
    done = 0
    while done < 50:
        rank = rng.choice([2, 3])
        g1 = _random_core(rng, rank, rng.randint(1, 3), 5)
        g2 = _random_core(rng, rank, rng.randint(1, 3), 5)
        conn = _random_word(rng, rank, rng.randint(1, 7))
        if conn.is_identity:
            continue
        try:
            glued = glue(g1, g2, conn)
        except NotAdmissibleError:
            continue
        gens = list(g1.generating_set()) + [conn * b * ~conn for b in g2.generating_set()]
        assert glued == fold(gens, rank)
        assert glued.free_rank == g1.free_rank + g2.free_rank
        done += 1
    _report(6, "50 random glues bit-identical to the fold oracle with additive rank")


def test_07_exponent_increment_decay():
    delta0 = critical_exponent(FIG1).delta
    k_hat = coornaert_constant(FIG1, 40)
    assert k_hat == pytest.approx(2.460417289961657, abs=1e-9)
    increments = []
    for m in (4, 8, 16, 32):
        conn = Word((1,)) ** m
        dec = connector_decompose(FIG1, FIG1, conn)
        glued = glue(FIG1, FIG1, conn)
        inc = dense_delta(glued) - delta0
        assert inc > 0
        assert inc < k_hat * math.exp(-delta0 * (2 * dec.j - len(conn)))
        increments.append(inc)
    assert increments == sorted(increments, reverse=True)
    _report(7, "self-glue increments positive, decreasing, under the decay envelope")


def test_08_end_to_end_construction():
    state = construct(FIG1, 0.1, 4, 3)
    assert state.delta <= state.delta0 + 0.1 + 1e-12
    assert balls_isomorphic_between(state.gamma, state.gamma.root, FIG1, FIG1.root, 3)
    assert verify_certificates(state, 4)["all_passed"]
    _report(8, "4-stage construction keeps the exponent inside eps=0.1, the radius-3 ball, and its certificates")


def test_09_exponent_monotone_along_towers():
    rng = random.Random(20260822)
    built = 0
    while built < 1000:
        rank = rng.choice([2, 3])
        core = _random_core(rng, rank, rng.randint(1, 3), 5)
        if core.free_rank == 0 or core.edge_count == core.vertex_count * core.rank:
            continue
        eps = rng.uniform(0.3, 1.0)
        stages = rng.randint(1, 4)
        radius = rng.randint(0, 2)
        state = construct(core, eps, stages, radius)
        for rec in state.history:
            assert rec.delta_after >= rec.delta_before - 1e-9
        assert state.delta >= state.delta0 - 1e-9
        assert state.delta <= state.delta0 + eps + 1e-12
        assert verify_certificates(state)["all_passed"]
        assert balls_isomorphic_between(state.gamma, state.gamma.root, core, core.root, radius)
        built += 1
    _report(9, "exponent nondecreasing within 1e-9 along 1000 random towers")


def test_10_property_suites():
    rng = random.Random(1001)
    for _ in range(100):
        rank = rng.choice([2, 3])
        gens = [_random_word(rng, rank, rng.randint(1, 8)) for _ in range(rng.randint(1, 4))]
        gens = [g for g in gens if not g.is_identity]
        if not gens:
            continue
        reference = fold(gens, rank)
        shuffled = list(gens)
        rng.shuffle(shuffled)
        folded = fold(shuffled, rank)
        folded.validate()
        assert folded == reference

    done = 0
    while done < 20:
        budget = rng.randint(2, 10)
        gens = []
        while budget > 0:
            length = rng.randint(1, budget)
            w = _random_word(rng, 2, length)
            if not w.is_identity:
                gens.append(w)
                budget -= len(w)
        if not gens:
            continue
        graph = fold(gens, 2)
        members = brute_member_set(graph, 8)
        assert members == brute_closed_walk_set(graph, 8)
        assert len(members) == cycle_counts(graph, 8)[8]
        done += 1
    _report(10, "fold confluence (100 shuffles) and membership equivalence (20 generating sets) hold")
