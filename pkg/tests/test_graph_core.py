from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbdgame.graph_core import (
    Graph,
    GraphFormatError,
    Hypergraph,
    PredominatedGraph,
    atomize,
    atomize_with_map,
    closed_neighborhood_hypergraph,
    components,
    is_cactus,
    is_connected,
    is_forest,
    is_tree,
    parse_graph,
    parse_hypergraph,
    render_graph,
    render_hypergraph,
)
from oracles import naive_staller_wins


@st.composite
def predominated_graphs(draw, max_n: int = 8):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    d = draw(st.frozensets(st.integers(0, n - 1)))
    return PredominatedGraph(Graph.from_edges(n, edges), d)


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


# --- parsing ------------------------------------------------------------------

def test_parse_p2():
    pg = parse_graph("n=2\ne 0 1\nD:")
    assert pg.graph == path(2)
    assert pg.predominated == frozenset()


def test_parse_p3_with_d():
    pg = parse_graph("n=3\ne 0 1\ne 1 2\nD: 1")
    assert pg.graph.adjacency == ((1,), (0, 2), (1,))
    assert pg.predominated == {1}


def test_parse_p1_and_bytes():
    pg = parse_graph(b"# single vertex\nn=1\nD:\n")
    assert pg.n == 1 and pg.graph.edge_count == 0


@pytest.mark.parametrize("text, line", [
    ("n=3\ne 0 1\nx 1 2\nD:", 3),
    ("n=3\ne 0 3\nD:", 2),
    ("n=3\ne 0 1\ne 1 0\nD:", 3),
    ("n=3\ne 1 1\nD:", 2),
    ("n=3\nD: 5", 2),
    ("n=2\nD:\ne 0 1", 3),
    ("n=2\ne 0 q\nD:", 2),
    ("m=2\nD:", 1),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(GraphFormatError) as exc:
        parse_graph(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_parse_missing_parts():
    with pytest.raises(GraphFormatError):
        parse_graph("")
    with pytest.raises(GraphFormatError):
        parse_graph("n=2\ne 0 1\n")


def test_labels_line():
    pg = parse_graph("n=2\ne 0 1\nlabels: 7 9\nD: 1")
    assert pg.graph.label(1) == 9 and pg.graph.id_of(7) == 0
    with pytest.raises(GraphFormatError):
        parse_graph("n=2\nlabels: 7 7\nD:")


@settings(max_examples=150, deadline=None)
@given(predominated_graphs())
def test_render_round_trip(pg):
    again = parse_graph(render_graph(pg))
    assert again == pg
    assert render_graph(again) == render_graph(pg)


def test_render_sorts_edges():
    g = Graph.from_edges(3, [(2, 1), (1, 0)])
    assert render_graph(g) == "n=3\ne 0 1\ne 1 2\nD:\n"


def test_hypergraph_text_round_trip():
    h = Hypergraph(3, {0: {0, 1}, "a": {2}, 1: {0, 1}})
    assert parse_hypergraph(render_hypergraph(h)) == h
    with pytest.raises(GraphFormatError):
        parse_hypergraph("n=2\nh 0 0 1\nh 0 1\n")


# --- types ----------------------------------------------------------------------

def test_graph_rejects_self_loop_and_range():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 2)])


def test_parallel_edges_collapse():
    assert Graph.from_edges(2, [(0, 1), (1, 0), (0, 1)]).edge_count == 1


def test_predominated_range_checked():
    with pytest.raises(ValueError):
        PredominatedGraph(path(2), frozenset({2}))


def test_hypergraph_keeps_duplicate_sets_and_rejects_empty():
    h = Hypergraph(2, {0: {0, 1}, 1: {0, 1}})
    assert len(h.edges) == 2
    with pytest.raises(ValueError):
        Hypergraph(2, {0: set()})
    with pytest.raises(ValueError):
        Hypergraph(2, {0: {2}})


def test_csr_matches_adjacency():
    g = cycle(5)
    offsets, targets = g.csr
    assert list(offsets) == [0, 2, 4, 6, 8, 10]
    for v in range(5):
        assert tuple(targets[offsets[v]:offsets[v + 1]]) == g.adjacency[v]


# --- closed neighborhoods -------------------------------------------------------------

def test_neighborhood_hypergraph_p2():
    h = closed_neighborhood_hypergraph(PredominatedGraph(path(2)))
    assert dict(h.edges) == {0: {0, 1}, 1: {0, 1}}


def test_neighborhood_hypergraph_p3_ends_predominated():
    h = closed_neighborhood_hypergraph(PredominatedGraph(path(3), frozenset({0, 2})))
    assert dict(h.edges) == {1: {0, 1, 2}}


def test_neighborhood_hypergraph_p1_full():
    h = closed_neighborhood_hypergraph(PredominatedGraph(path(1), frozenset({0})))
    assert h.n == 1 and not h.edges


@settings(max_examples=100, deadline=None)
@given(predominated_graphs())
def test_neighborhood_edge_count(pg):
    assert len(closed_neighborhood_hypergraph(pg).edges) == pg.n - len(pg.predominated)


# --- atomize ------------------------------------------------------------------------

def test_atomize_p2_fully_predominated():
    out = atomize(PredominatedGraph(path(2), frozenset({0, 1})))
    assert out.n == 0


def test_atomize_p3():
    out, mapping = atomize_with_map(PredominatedGraph(path(3), frozenset({0, 1})))
    assert out.graph == path(2)
    assert out.predominated == {0}
    assert mapping == {1: 0, 2: 1}


def test_atomize_fixed_point(fixtures):
    pg = fixtures["fig3_bottom"]
    assert atomize(pg) == pg


@settings(max_examples=150, deadline=None)
@given(predominated_graphs())
def test_atomize_idempotent(pg):
    once = atomize(pg)
    assert atomize(once) == once


@settings(max_examples=80, deadline=None)
@given(predominated_graphs(max_n=9))
def test_atomize_preserves_outcome(pg):
    red = atomize(pg)
    before = naive_staller_wins(pg.n, pg.graph.edges(), pg.predominated)
    after = naive_staller_wins(red.n, red.graph.edges(), red.predominated)
    assert before == after


# --- structure ------------------------------------------------------------------------

def test_components_examples(fixtures):
    assert components(path(2)) == [[0, 1]]
    assert components(Graph.from_edges(2, [])) == [[0], [1]]
    comps = components(fixtures["fig2_tree"].graph)
    assert len(comps) == 1 and len(comps[0]) == 13


@settings(max_examples=100, deadline=None)
@given(predominated_graphs())
def test_components_match_networkx(pg):
    g = pg.graph
    ng = nx.Graph(g.edges())
    ng.add_nodes_from(range(g.n))
    expected = sorted(sorted(c) for c in nx.connected_components(ng))
    assert components(g) == expected
    assert is_connected(g) == nx.is_connected(ng)
    assert is_forest(g) == nx.is_forest(ng)


def test_tree_and_cactus_examples():
    assert is_tree(path(3))
    assert not is_tree(cycle(4)) and is_cactus(cycle(4))
    k4 = Graph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    assert not is_cactus(k4)
    # two triangles sharing a vertex form a cactus, sharing an edge do not
    bowtie = Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])
    assert is_cactus(bowtie)
    diamond = Graph.from_edges(4, [(0, 1), (1, 2), (2, 0), (1, 3), (3, 2)])
    assert not is_cactus(diamond)
    assert not is_cactus(Graph.from_edges(2, []))
