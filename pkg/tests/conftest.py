from __future__ import annotations

import random

import networkx as nx
import pytest

from mbdgame.fixtures import load_fixture
from mbdgame.graph_core import Graph, PredominatedGraph


def tree_corpus(max_n: int):
    """All non-isomorphic trees with 1..max_n vertices as package graphs."""
    yield Graph.from_edges(1, [])
    for n in range(2, max_n + 1):
        for t in nx.nonisomorphic_trees(n):
            yield Graph.from_edges(n, list(t.edges()))


def predominations(g: Graph, exhaustive_up_to: int = 7, samples: int = 50, seed: int = 0,
                   nonempty: bool = False):
    """Every D for small trees, ``samples`` random D for larger ones."""
    n = g.n
    if n <= exhaustive_up_to:
        for bits in range(1 << n):
            if nonempty and not bits:
                continue
            yield frozenset(v for v in range(n) if bits >> v & 1)
        return
    rng = random.Random(seed * 7919 + n)
    for _ in range(samples):
        while True:
            d = frozenset(v for v in range(n) if rng.random() < 0.5)
            if d or not nonempty:
                break
        yield d


@pytest.fixture(scope="session")
def fixtures():
    names = ["p1", "p2", "p3", "fig1_tree", "fig2_tree", "fig3_bottom", "fig3_middle", "fig3_top",
             "fig6b_dominator_critical", "r_star"]
    return {name: load_fixture(name) for name in names}


def by_labels(pg: PredominatedGraph, labels) -> frozenset[int]:
    return frozenset(pg.graph.id_of(x) for x in labels)


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance PASS/FAIL lines at the end of the run."""
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            for name, value in getattr(rep, "user_properties", []):
                if name == "acceptance":
                    lines.append(value)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
