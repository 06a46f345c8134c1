"""Constructor-level checks for the built-in example corpus.

The heavy numeric verification of every entry lives in the acceptance
suite; here we pin down the presentations themselves: generator counts,
declared dimensions, Hilbert oracles, dedup of the graph enumeration, and
the reseed protocol for randomized families.
"""

import math
from itertools import permutations

import pytest

from bettilab.corpus import (
    CorpusEntry,
    CorpusMismatch,
    all_graphs,
    apolarity_gorenstein,
    builtin_corpus,
    complete_intersection_quadrics,
    edge_ideal,
    generic_quadrics,
    graph_class_count,
    hilbert_from_numerator,
    plucker_presentation,
    segre_presentation,
    veronese_presentation,
    verify_entry,
)
from bettilab.fields import GF, QQ


# -- graph enumeration -------------------------------------------------------


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34)])
def test_graph_class_counts(n, count):
    assert graph_class_count(n) == count


def test_graph_enumeration_matches_canonical_forms():
    # independent dedup oracle: canonicalize every mask by the minimum over
    # all vertex permutations and count distinct canonical forms
    n = 4
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    idx = {p: k for k, p in enumerate(pairs)}
    canon = set()
    for mask in range(1 << len(pairs)):
        best = None
        for perm in permutations(range(n)):
            m = 0
            for k, (u, v) in enumerate(pairs):
                if mask >> k & 1:
                    m |= 1 << idx[tuple(sorted((perm[u], perm[v])))]
            best = m if best is None else min(best, m)
        canon.add(best)
    assert len(canon) == 11
    assert graph_class_count(n) == len(canon)


def test_edge_ideal_presentation():
    ent = edge_ideal(3, [(0, 1), (1, 2)], name="path3")
    assert len(ent.generators) == 2
    assert {g.terms[0][0] for g in ent.generators} == {(1, 1, 0), (0, 1, 1)}
    # independent set {x0, x2} is maximal
    assert ent.declared["dim"] == 2
    assert ent.declared["koszul"] is True


def test_edge_ideal_dimension_is_independence_number():
    cycle5 = edge_ideal(5, [(i, (i + 1) % 5) for i in range(5)])
    assert cycle5.declared["dim"] == 2
    k4 = edge_ideal(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    assert k4.declared["dim"] == 1
    empty = edge_ideal(4, [])
    assert empty.declared["dim"] == 4


def test_edge_ideal_rejects_bad_edges():
    with pytest.raises(ValueError):
        edge_ideal(3, [(0, 0)])
    with pytest.raises(ValueError):
        edge_ideal(3, [(0, 5)])


# -- toric families ----------------------------------------------------------


def test_veronese_conic():
    ent = veronese_presentation(2, 1)
    assert ent.expected["e"] == 3
    assert len(ent.generators) == 1
    g = ent.generators[0]
    assert sorted(exps for exps, _ in g.terms) == [(0, 2, 0), (1, 0, 1)]
    assert ent.variable_tags == ((0, 2), (1, 1), (2, 0)) or ent.variable_tags == (
        (2, 0),
        (1, 1),
        (0, 2),
    )
    assert ent.expected["hilbert"] == [2 * d + 1 for d in range(4)]


def test_veronese_2_2_shape():
    ent = veronese_presentation(2, 2)
    assert ent.expected["e"] == 10
    # quadric relation count: all degree-2 monomials in the 10 presentation
    # variables minus the dimension of the degree-4 piece downstairs
    assert len(ent.generators) == math.comb(11, 2) - math.comb(7, 4)
    assert ent.declared["dim"] == 4
    a = ent.algebra()
    assert [a.piece_dim(d) for d in range(3)] == ent.expected["hilbert"][:3]


def test_veronese_guard():
    with pytest.raises(ValueError):
        veronese_presentation(2, 3)  # 21 generators, over the default guard


def test_segre_presentations():
    s11 = segre_presentation((1, 1))
    assert len(s11.generators) == 1
    s21 = segre_presentation((2, 1))
    assert len(s21.generators) == 3
    s111 = segre_presentation((1, 1, 1))
    assert len(s111.generators) == 9
    assert s111.expected["hilbert"] == [(d + 1) ** 3 for d in range(7)]
    # numerator route agrees with the product-of-binomials route
    assert (
        hilbert_from_numerator(s111.expected["hilbert_numerator"], 4, 6)
        == s111.expected["hilbert"]
    )


def test_segre_tags_are_tag_homogeneous():
    ent = segre_presentation((2, 1))
    a = ent.algebra()  # constructor validates tag homogeneity
    assert a.variable_tags is not None
    assert all(sum(t) == 2 for t in a.variable_tags)


def test_plucker_presentations():
    p4 = plucker_presentation(4)
    assert len(p4.generators) == 1
    assert len(p4.generators[0].terms) == 3
    a = p4.algebra()
    assert [a.piece_dim(d) for d in range(4)] == p4.expected["hilbert"][:4]
    p5 = plucker_presentation(5)
    assert len(p5.generators) == 5
    b = p5.algebra()
    assert b.piece_dim(2) == hilbert_from_numerator((1, 3, 1), 7, 2)[2]


# -- randomized and deterministic complete intersections ---------------------


def test_ci_quadrics_expectations():
    ent = complete_intersection_quadrics(2, 2)
    assert ent.expected["betti"] == {(0, 0): 1, (1, 2): 2, (2, 4): 1}
    assert ent.expected["hilbert"][:4] == [1, 2, 1, 0]
    ent33 = complete_intersection_quadrics(3, 3, field=GF(2))
    assert ent33.expected["betti"][(2, 4)] == 3


def test_generic_quadrics_deterministic():
    a = generic_quadrics(4, 2, seed=1)
    b = generic_quadrics(4, 2, seed=1)
    assert [g.terms for g in a.generators] == [g.terms for g in b.generators]
    c = generic_quadrics(4, 2, seed=2)
    assert [g.terms for g in a.generators] != [g.terms for g in c.generators]


def test_generic_quadrics_ci_expectations():
    ent = generic_quadrics(5, 3, seed=1)
    assert ent.expected["betti"] == {(i, 2 * i): math.comb(3, i) for i in range(4)}
    assert ent.declared["dim"] == 2


def test_gorenstein_socle_presentation():
    ent = apolarity_gorenstein(seed=1)
    assert len(ent.generators) == 10
    a = ent.algebra()
    assert [a.piece_dim(d) for d in range(5)] == [1, 5, 5, 1, 0]
    assert ent.declared["dim"] == 0


def test_hilbert_from_numerator_artinian():
    assert hilbert_from_numerator((1, 1, 1), 0, 4) == [1, 1, 1, 0, 0]
    assert hilbert_from_numerator((1, 2, 1), 2, 3) == [1, 4, 8, 12]


# -- verification protocol ---------------------------------------------------


def test_verify_entry_flags_wrong_expectation():
    ent = edge_ideal(3, [(0, 1), (1, 2)], name="path3")
    ent.expected = dict(ent.expected, defining_quadrics=3)
    with pytest.raises(CorpusMismatch):
        verify_entry(ent)


def test_verify_entry_reseeds_degenerate_draws():
    calls = []

    def remake(seed):
        calls.append(seed)
        good = seed >= 3
        ent = edge_ideal(3, [(0, 1), (1, 2)], name="flaky")
        ent.expected = dict(ent.expected, defining_quadrics=2 if good else 9)
        ent.seed = seed
        ent.remake = remake
        return ent

    bad = remake(1)
    verify_entry(bad)
    assert calls and calls[-1] >= 3

    hopeless = remake(1)
    hopeless.remake = lambda seed: remake(0)
    with pytest.raises(CorpusMismatch):
        verify_entry(hopeless, reseed_limit=2)


def test_builtin_corpus_well_formed():
    entries = builtin_corpus()
    names = [e.name for e in entries]
    assert len(names) == len(set(names))
    assert len(entries) >= 15
    for ent in entries:
        assert ent.window is not None
        assert isinstance(ent.declared, dict)
    fields = {e.field.characteristic for e in entries}
    assert 0 in fields and len(fields) >= 3
