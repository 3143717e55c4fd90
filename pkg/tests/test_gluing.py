import random

import pytest

from stallings import fold, parse_word
from stallings.core import CoreGraph
from stallings.gluing import NotAdmissibleError, connector_decompose, glue
from stallings.growth import cycle_counts
from stallings.words import RankError, Word

FIG1 = fold([parse_word("a1 a2 a1^-1", 2), parse_word("a1 a1 a1 a2 a2 a1^-1 a1^-1", 2)], 2)

A1_LOOP = fold([Word((1,))], 2)
STEM_LOOP = fold([parse_word("a2 a1 a2^-1", 2)], 2)


def _random_word(rng, rank, length):
    letters = []
    for _ in range(length):
        l = rng.choice([s * i for i in range(1, rank + 1) for s in (1, -1)])
        if letters and l == -letters[-1]:
            continue
        letters.append(l)
    return Word(letters)


def _random_core(rng, rank):
    gens = [_random_word(rng, rank, rng.randint(1, 5)) for _ in range(rng.randint(1, 3))]
    gens = [g for g in gens if not g.is_identity]
    return fold(gens or [Word((1,))], rank)


def _admissible_triples(seed, count, rank_choices=(2, 3)):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        rank = rng.choice(rank_choices)
        g1 = _random_core(rng, rank)
        g2 = _random_core(rng, rank)
        conn = _random_word(rng, rank, rng.randint(1, 7))
        if conn.is_identity:
            continue
        try:
            connector_decompose(g1, g2, conn)
        except NotAdmissibleError:
            continue
        out.append((g1, g2, conn))
    return out


class TestDecompose:
    def test_two_loops_long_connector(self):
        dec = connector_decompose(A1_LOOP, A1_LOOP, Word((2,)) ** 3)
        assert (dec.j1, dec.j, dec.j2) == (0, 3, 0)
        assert dec.u1 == 0 and dec.u2 == 0
        assert dec.join_word == Word((2, 2, 2))

    def test_figure_self_connector_prefix_absorbed(self):
        dec = connector_decompose(FIG1, FIG1, Word((1,)) ** 4)
        assert (dec.j1, dec.j, dec.j2) == (3, 1, 0)
        assert dec.u1 == 3
        assert dec.join_word == Word((1,))

    def test_suffix_trace_and_endpoints(self):
        conn = Word((1, -2, -1, -2))
        dec = connector_decompose(A1_LOOP, STEM_LOOP, conn)
        assert (dec.j1, dec.j, dec.j2) == (1, 1, 2)
        assert (dec.u1, dec.u2) == (0, 1)
        assert dec.join_word == Word((-2,))

    def test_fully_readable_connector_rejected(self):
        conn = parse_word("a1 a2 a2 a2", 2)
        with pytest.raises(NotAdmissibleError) as info:
            connector_decompose(FIG1, FIG1, conn)
        assert info.value.j1 == 4
        assert info.value.length == 4

    def test_swallowed_from_both_ends(self):
        # maximal suffix trace runs backwards through the stem, so the
        # two traces overlap and no join segment is left
        conn = parse_word("a1 a2 a1 a2^-1", 2)
        with pytest.raises(NotAdmissibleError) as info:
            connector_decompose(A1_LOOP, STEM_LOOP, conn)
        assert info.value.j1 == 1
        assert info.value.j2 == 3

    def test_error_is_a_value_error(self):
        assert issubclass(NotAdmissibleError, ValueError)

    def test_identity_connector_rejected(self):
        with pytest.raises(ValueError):
            connector_decompose(A1_LOOP, A1_LOOP, Word(()))

    def test_rank_mismatch_rejected(self):
        with pytest.raises(ValueError):
            connector_decompose(A1_LOOP, fold([Word((1,))], 3), Word((2,)))

    def test_connector_outside_ambient_rank(self):
        with pytest.raises(RankError):
            connector_decompose(A1_LOOP, A1_LOOP, Word((3,)))

    def test_split_arithmetic_on_random_triples(self):
        for g1, g2, conn in _admissible_triples(911, 25):
            dec = connector_decompose(g1, g2, conn)
            letters = conn.letters
            assert dec.j1 + dec.j + dec.j2 == len(letters)
            assert dec.j >= 1
            assert dec.join_word.letters == letters[dec.j1 : len(letters) - dec.j2]
            assert g1.trace_vertex(letters[: dec.j1]) == dec.u1
            inv_suffix = [-l for l in reversed(letters[len(letters) - dec.j2 :])]
            assert g2.trace_vertex(inv_suffix) == dec.u2
            # maximality of both traces
            if dec.j >= 1:
                assert g1.step(dec.u1, letters[dec.j1]) is None
                assert g2.step(dec.u2, -letters[len(letters) - dec.j2 - 1]) is None


class TestGlue:
    def test_two_loops_shape(self):
        glued = glue(A1_LOOP, A1_LOOP, Word((2,)) ** 3)
        assert (glued.vertex_count, glued.edge_count) == (4, 5)
        assert glued.free_rank == 2
        want = fold([Word((1,)), Word((2, 2, 2)) * Word((1,)) * Word((-2, -2, -2))], 2)
        assert glued == want

    def test_figure_self_glue_shape(self):
        glued = glue(FIG1, FIG1, Word((1,)) ** 4)
        assert (glued.vertex_count, glued.edge_count) == (10, 13)
        assert glued.free_rank == 4

    def test_trim_fires_when_suffix_bypasses_a_stem(self):
        glued = glue(A1_LOOP, STEM_LOOP, Word((1, -2, -1, -2)))
        assert (glued.vertex_count, glued.edge_count) == (2, 3)
        assert glued.free_rank == 2
        assert glued.edges() == [(0, 1, 0), (1, 1, 1), (1, 2, 0)]

    def test_inadmissible_pair_folds_to_small_core(self):
        # for this connector the generated subgroup is not a free
        # product of the factors: the folded amalgam collapses
        g1, g2 = A1_LOOP, STEM_LOOP
        conn = parse_word("a1 a2 a1 a2^-1", 2)
        with pytest.raises(NotAdmissibleError):
            glue(g1, g2, conn)
        inner = parse_word("a2 a1 a2^-1", 2)
        amalgam = fold([Word((1,)), conn * inner * ~conn], 2)
        assert (amalgam.vertex_count, amalgam.edge_count) == (2, 3)
        assert amalgam.free_rank == 2

    def test_matches_fold_oracle(self):
        for g1, g2, conn in _admissible_triples(50907, 50):
            amalgam_gens = list(g1.generating_set())
            amalgam_gens += [conn * b * ~conn for b in g2.generating_set()]
            assert glue(g1, g2, conn) == fold(amalgam_gens, g1.rank)

    def test_rank_is_additive(self):
        for g1, g2, conn in _admissible_triples(4242, 30):
            assert glue(g1, g2, conn).free_rank == g1.free_rank + g2.free_rank

    def test_both_factors_embed(self):
        for g1, g2, conn in _admissible_triples(606, 12):
            glued = glue(g1, g2, conn)
            for b in g1.generating_set():
                assert b in glued
            for b in g2.generating_set():
                assert conn * b * ~conn in glued

    def test_counts_dominate_first_factor(self):
        for g1, g2, conn in _admissible_triples(75, 10):
            glued = glue(g1, g2, conn)
            base = cycle_counts(g1, 10)
            grown = cycle_counts(glued, 10)
            assert all(grown[r] >= base[r] for r in range(11))

    def test_trivial_second_factor_is_absorbed(self):
        glued = glue(FIG1, CoreGraph.trivial(2), Word((2,)))
        assert glued == FIG1

    def test_trivial_first_factor_keeps_conjugator_stem(self):
        glued = glue(CoreGraph.trivial(2), FIG1, Word((2,)))
        assert glued.vertex_count == 6
        assert glued.free_rank == 2
        assert parse_word("a2 a1 a2 a1^-1 a2^-1", 2) in glued
        assert parse_word("a1 a2 a1^-1", 2) not in glued

    def test_glue_result_validates(self):
        for g1, g2, conn in _admissible_triples(13, 10):
            glue(g1, g2, conn).validate()
