from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import by_labels, predominations, tree_corpus
from mbdgame.dominator_critical import (
    TRANSVERSAL_EDGE_LIMIT,
    associated_hypergraph,
    enumerate_minimal_transversals,
    is_dominator_critical_tree,
    is_minimal_transversal,
    is_transversal,
)
from mbdgame.graph_core import Graph, Hypergraph, InputClassError, PredominatedGraph
from mbdgame.hypergraph_game import CapacityError, is_dominator_critical_game
from mbdgame.tree_structures import staller_wins_tree
from oracles import naive_minimal_transversals


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def edge_sets(h: Hypergraph) -> set[frozenset[int]]:
    return set(h.edges.values())


# --- associated hypergraph ---------------------------------------------------------

def test_associated_examples(fixtures):
    assert associated_hypergraph(path(2)).empty
    assert edge_sets(associated_hypergraph(path(3)).base) == {frozenset({0, 2})}
    assert len(associated_hypergraph(fixtures["fig2_tree"].graph).base.edges) == 4


def test_associated_fig2_edges(fixtures):
    pg = fixtures["fig2_tree"]
    got = {frozenset(pg.graph.label(v) for v in e) for e in associated_hypergraph(pg.graph).base.edges.values()}
    assert got == {frozenset({2, 6}), frozenset({7, 9}), frozenset({7, 10, 11, 14}), frozenset({9, 10, 11, 14})}


def test_associated_rejects_non_tree():
    with pytest.raises(InputClassError):
        associated_hypergraph(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))


# --- transversals ---------------------------------------------------------------------

def test_minimal_transversal_examples(fixtures):
    assert is_minimal_transversal(Hypergraph(1, {}), set())
    h = Hypergraph(3, {0: {0, 2}})
    assert is_minimal_transversal(h, {0})
    assert not is_minimal_transversal(h, {0, 2})
    assert not is_transversal(h, {1})
    pg = fixtures["fig2_tree"]
    x = associated_hypergraph(pg.graph).base
    assert is_minimal_transversal(x, by_labels(pg, [6, 9, 14]))


def test_enumerate_examples(fixtures):
    got = enumerate_minimal_transversals(Hypergraph(3, {0: {0, 2}}))
    assert [t.vertices for t in got.transversals] == [{0}, {2}] and not got.truncated
    got = enumerate_minimal_transversals(Hypergraph(3, {0: {0, 1}, 1: {1, 2}}))
    assert [t.vertices for t in got.transversals] == [{1}, {0, 2}]
    pg = fixtures["fig2_tree"]
    x = associated_hypergraph(pg.graph).base
    found = {t.vertices for t in enumerate_minimal_transversals(x).transversals}
    assert by_labels(pg, [6, 9, 14]) in found
    assert found == naive_minimal_transversals(list(x.edges.values()))


def test_enumerate_cap_and_limit():
    h = Hypergraph(6, {0: {0, 1}, 1: {2, 3}, 2: {4, 5}})
    full = enumerate_minimal_transversals(h)
    assert len(full.transversals) == 8 and not full.truncated
    capped = enumerate_minimal_transversals(h, cap=3)
    assert len(capped.transversals) == 3 and capped.truncated
    assert capped.transversals == full.transversals[:3]
    with pytest.raises(CapacityError):
        enumerate_minimal_transversals(Hypergraph(17, {i: {i} for i in range(17)}))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.lists(
    st.frozensets(st.integers(0, n - 1), min_size=1, max_size=4), max_size=7).map(lambda es: (n, es))))
def test_enumerate_matches_naive(case):
    n, es = case
    h = Hypergraph(n, dict(enumerate(es)))
    got = enumerate_minimal_transversals(h)
    sets = [t.vertices for t in got.transversals]
    assert len(sets) == len(set(sets))
    assert set(sets) == naive_minimal_transversals(es)
    assert all(is_minimal_transversal(h, s) for s in sets)


# --- Dominator-criticality ------------------------------------------------------------------

def test_dominator_critical_examples(fixtures):
    r = fixtures["r_star"]
    assert is_dominator_critical_tree(r.graph, r.predominated)
    pg = fixtures["fig2_tree"]
    assert is_dominator_critical_tree(pg.graph, by_labels(pg, [6, 9, 14]))
    b = fixtures["fig6b_dominator_critical"]
    assert is_dominator_critical_tree(b.graph, b.predominated)
    assert not is_dominator_critical_tree(path(2), {0})


def test_empty_d_rejected():
    with pytest.raises(ValueError):
        is_dominator_critical_tree(path(3), set())


def test_capacity():
    with pytest.raises(CapacityError):
        is_dominator_critical_tree(path(21), {0})


def test_matches_game_definition_on_corpus():
    cases = 0
    for t in tree_corpus(8):
        for d in predominations(t, samples=15, nonempty=True):
            pg = PredominatedGraph(t, d)
            assert is_dominator_critical_tree(t, d) == is_dominator_critical_game(pg), (t.edges(), sorted(d))
            cases += 1
    assert cases > 2000


def test_observation_neighbors_not_critical():
    # a critical D has no critical neighbor differing in one vertex
    for t in tree_corpus(8):
        ah = associated_hypergraph(t)
        if ah.empty or len(ah.base.edges) > TRANSVERSAL_EDGE_LIMIT:
            continue
        for tr in enumerate_minimal_transversals(ah.base).transversals:
            d = tr.vertices
            for v in range(t.n):
                other = d ^ {v}
                if other:
                    assert not is_dominator_critical_tree(t, other)


def test_observation_existence_iff_staller_wins():
    for t in tree_corpus(9):
        ah = associated_hypergraph(t)
        # a nonempty hypergraph always has a minimal transversal
        exists = not ah.empty
        if exists and len(ah.base.edges) <= TRANSVERSAL_EDGE_LIMIT:
            first = enumerate_minimal_transversals(ah.base, cap=1).transversals[0].vertices
            assert is_dominator_critical_tree(t, first)
        assert exists == staller_wins_tree(PredominatedGraph(t))
