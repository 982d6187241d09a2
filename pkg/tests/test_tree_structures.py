from __future__ import annotations

import random

import pytest

from conftest import by_labels, predominations, tree_corpus
from mbdgame.graph_core import Graph, InputClassError, PredominatedGraph, atomize
from mbdgame.hypergraph_game import CapacityError, is_mbd_critical, staller_wins
from mbdgame.tree_structures import (
    Substructure,
    _check_critical_tree_py,
    check_critical_tree,
    color_vertices,
    critical_witness,
    enumerate_substructures,
    find_substructure_avoiding,
    is_atomic_mbd_critical_tree,
    is_mbd_critical_tree,
    is_substructure,
    staller_wins_tree,
)
from oracles import naive_mbd_critical, naive_staller_wins, naive_substructures


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def labels_of(pg, ids):
    return sorted(pg.graph.label(v) for v in ids)


# --- is_substructure --------------------------------------------------------------

def test_single_isolated_vertex_is_substructure():
    assert is_substructure(path(1), Substructure.make([0], [], [0]))


def test_p3_in_p3():
    assert is_substructure(path(3), Substructure.make([0, 1, 2], [(0, 1), (1, 2)], [0, 2]))


def test_fixed_degree_violated():
    # a-b-c inside P4 with a = vertex 1, which has degree 2 in the host
    f = Substructure.make([1, 2, 3], [(1, 2), (2, 3)], [1, 3])
    assert not is_substructure(path(4), f)


def test_bad_shapes_rejected():
    g = path(3)
    assert not is_substructure(g, Substructure.make([0, 1, 2], [(0, 1), (1, 2)], [1]))
    assert not is_substructure(g, Substructure.make([0, 1], [(0, 1)], [0]))
    assert not is_substructure(g, Substructure.make([0, 2], [(0, 2)], [0]))


def test_substructure_range_error():
    with pytest.raises(IndexError):
        is_substructure(path(2), Substructure.make([5], [], [5]))


# --- find_substructure_avoiding --------------------------------------------------------

def test_find_examples(fixtures):
    assert find_substructure_avoiding(path(1)) == Substructure.make([0], [], [0])
    assert find_substructure_avoiding(path(2)) is None
    for d in ({1}, set()):
        w = find_substructure_avoiding(path(3), d)
        assert w.vertices == {0, 1, 2} and w.fixed_degree == {0, 2}
    assert find_substructure_avoiding(path(3), {0}) is None
    pg = fixtures["fig3_bottom"]
    w = find_substructure_avoiding(pg.graph, pg.predominated)
    assert w.vertices == frozenset(range(9))
    assert labels_of(pg, w.fixed_degree) == [1, 3, 5, 7, 9]


def test_find_rejects_non_forest():
    with pytest.raises(InputClassError):
        find_substructure_avoiding(Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)]))


def test_staller_wins_tree_examples(fixtures):
    assert not staller_wins_tree(PredominatedGraph(path(2)))
    assert staller_wins_tree(PredominatedGraph(path(3)))
    assert staller_wins_tree(fixtures["fig3_bottom"])


def test_staller_win_matches_oracle_on_corpus():
    checked = 0
    for t in tree_corpus(9):
        for d in predominations(t):
            pg = PredominatedGraph(t, d)
            witness = find_substructure_avoiding(t, d)
            expected = naive_staller_wins(t.n, t.edges(), d) if t.n <= 7 else staller_wins(pg)
            assert (witness is not None) == expected, (t.edges(), sorted(d))
            if witness is not None:
                assert is_substructure(t, witness)
                assert not witness.fixed_degree & d
            checked += 1
    assert checked > 3000


def test_forest_components_handled():
    # P2 plus P3: Staller wins on the P3 component
    g = Graph.from_edges(5, [(0, 1), (2, 3), (3, 4)])
    assert staller_wins_tree(PredominatedGraph(g))
    assert staller_wins_tree(PredominatedGraph(g, frozenset({3})))
    assert not staller_wins_tree(PredominatedGraph(g, frozenset({2})))


# --- enumeration and coloring ------------------------------------------------------------

def test_enumerate_examples(fixtures):
    assert enumerate_substructures(path(2)) == []
    subs = enumerate_substructures(path(3))
    assert len(subs) == 1 and subs[0].fixed_degree == {0, 2}
    assert len(enumerate_substructures(fixtures["fig2_tree"].graph)) == 4


def test_enumerate_capacity():
    with pytest.raises(CapacityError):
        enumerate_substructures(path(21))


def test_enumerate_matches_naive():
    for t in tree_corpus(10):
        got = {(f.vertices, f.fixed_degree) for f in enumerate_substructures(t)}
        assert got == set(naive_substructures(t.n, t.edges()))


def test_enumeration_sorted_and_valid(fixtures):
    t = fixtures["fig2_tree"].graph
    subs = enumerate_substructures(t)
    assert [f.sort_key() for f in subs] == sorted(f.sort_key() for f in subs)
    assert all(is_substructure(t, f) for f in subs)


def test_color_examples(fixtures):
    assert color_vertices(path(2)).gray == {0, 1}
    c = color_vertices(path(3))
    assert c.black == {0, 2} and c.white == {1} and not c.gray
    pg = fixtures["fig2_tree"]
    c = color_vertices(pg.graph)
    assert labels_of(pg, c.black) == [2, 6, 7, 9, 10, 11, 14]
    assert labels_of(pg, c.white) == [5, 8, 12, 13]
    assert labels_of(pg, c.gray) == [1, 4]


def test_color_methods_agree():
    for t in tree_corpus(14):
        assert color_vertices(t, "rerooting") == color_vertices(t, "enumerate")


def test_color_methods_agree_on_random_trees():
    rng = random.Random(4)
    for _ in range(200):
        n = rng.randint(2, 18)
        t = Graph.from_edges(n, [(rng.randrange(i), i) for i in range(1, n)])
        assert color_vertices(t, "rerooting") == color_vertices(t, "enumerate")


def test_color_unknown_method():
    with pytest.raises(ValueError):
        color_vertices(path(3), "magic")


# --- criticality ----------------------------------------------------------------------------

def test_critical_examples(fixtures):
    bottom = fixtures["fig3_bottom"]
    assert is_mbd_critical_tree(bottom)
    assert is_atomic_mbd_critical_tree(bottom)
    assert not is_mbd_critical_tree(bottom.with_predominated(by_labels(bottom, [2, 4, 6])))
    assert not is_mbd_critical(bottom.with_predominated(by_labels(bottom, [2, 4, 6])))
    assert check_critical_tree(PredominatedGraph(path(3))) == (False, "X is not a bipartition class of T'")
    assert is_atomic_mbd_critical_tree(PredominatedGraph(path(1)))


def test_top_trees_critical_not_atomic(fixtures):
    for name in ("fig3_top", "fig3_middle"):
        pg = fixtures[name]
        assert is_mbd_critical_tree(pg)
        assert not is_atomic_mbd_critical_tree(pg)
        assert is_mbd_critical(pg)


def test_atomized_top_tree_is_atomic(fixtures):
    red = atomize(fixtures["fig3_top"])
    assert is_atomic_mbd_critical_tree(red)


@pytest.mark.parametrize("edges, n, d, reason", [
    ([(0, 1)], 2, {0, 1}, "no non-predominated vertex"),
    ([(0, 1), (1, 2), (2, 3)], 4, {1}, "X is not a bipartition class of T'"),
    ([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)], 7, {1, 2, 3, 4, 5}, "T' is disconnected"),
    ([(0, 1), (1, 2), (1, 3)], 4, {1}, "a vertex outside X has degree other than 2 in T'"),
])
def test_failure_reasons(edges, n, d, reason):
    pg = PredominatedGraph(Graph.from_edges(n, edges), frozenset(d))
    assert check_critical_tree(pg) == (False, reason)
    assert _check_critical_tree_py(pg) == (False, reason)


def test_non_forest_rejected():
    pg = PredominatedGraph(Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)]))
    with pytest.raises(InputClassError):
        check_critical_tree(pg)
    with pytest.raises(InputClassError):
        _check_critical_tree_py(pg)


def test_criticality_matches_oracle_on_corpus():
    for t in tree_corpus(9):
        for d in predominations(t):
            pg = PredominatedGraph(t, d)
            expected = naive_mbd_critical(t.n, t.edges(), d) if t.n <= 7 else is_mbd_critical(pg)
            assert is_mbd_critical_tree(pg) == expected, (t.edges(), sorted(d))
            if expected:
                w = critical_witness(pg)
                assert w.fixed_degree == frozenset(range(t.n)) - d
                assert is_substructure(t, w)


def test_critical_forest_extra_predominated_component():
    # P3 with D = {1} is not critical; P1 free plus a fully predominated P2 is
    g = Graph.from_edges(3, [(1, 2)])
    pg = PredominatedGraph(g, frozenset({1, 2}))
    assert is_mbd_critical_tree(pg) == is_mbd_critical(pg) is True
    pg = PredominatedGraph(g, frozenset({1}))
    assert is_mbd_critical_tree(pg) == is_mbd_critical(pg)
