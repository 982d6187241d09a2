"""The compiled kernel and the pure-Python fallback must agree exactly."""

from __future__ import annotations

import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import predominations, tree_corpus
from mbdgame import _kernel_py
from mbdgame import hypergraph_game as hg
from mbdgame.bench import critical_random_tree, solver_instances
from mbdgame.graph_core import Graph, Hypergraph, PredominatedGraph
from mbdgame.tree_structures import _check_critical_tree_py, check_critical_tree

ext = hg._ext
needs_ext = pytest.mark.skipif(ext is None, reason="compiled kernel not built")


@st.composite
def hypergraphs(draw):
    n = draw(st.integers(1, 10))
    edges = draw(st.lists(st.frozensets(st.integers(0, n - 1), min_size=1, max_size=5), max_size=8))
    return Hypergraph(n, dict(enumerate(edges)))


@needs_ext
@settings(max_examples=200, deadline=None)
@given(hypergraphs())
def test_random_hypergraph_parity(h):
    assert hg.solve(h, impl=ext) == hg.solve(h, impl=_kernel_py)


@needs_ext
@pytest.mark.parametrize("name", ["fig2_tree", "fig3_bottom", "fig3_top", "r_star", "H1"])
def test_fixture_parity(name):
    h = solver_instances()[name]
    assert hg.solve(h, impl=ext) == hg.solve(h, impl=_kernel_py)


@needs_ext
def test_solve_state_parity():
    h = solver_instances()["fig3_bottom"]
    state = hg.GameState.from_sets([0], [])
    assert hg.solve_state(h, state, impl=ext) == hg.solve_state(h, state, impl=_kernel_py)


@needs_ext
def test_recognizer_parity_on_corpus():
    for t in tree_corpus(9):
        for d in predominations(t, samples=20):
            pg = PredominatedGraph(t, d)
            assert check_critical_tree(pg) == _check_critical_tree_py(pg)


@needs_ext
def test_recognizer_parity_on_random_forests():
    rng = random.Random(11)
    for _ in range(500):
        n = rng.randint(1, 30)
        edges = [(rng.randrange(i), i) for i in range(1, n) if rng.random() < 0.9]
        pg = PredominatedGraph(Graph.from_edges(n, edges),
                               frozenset(v for v in range(n) if rng.random() < 0.5))
        assert check_critical_tree(pg) == _check_critical_tree_py(pg)


@needs_ext
@pytest.mark.parametrize("n", [1, 3, 4, 1001, 1024])
def test_recognizer_parity_on_benchmark_trees(n):
    pg = critical_random_tree(n, seed=n)
    assert check_critical_tree(pg) == _check_critical_tree_py(pg) == (True, "ok")


def test_pure_python_selected_by_environment():
    code = "from mbdgame import hypergraph_game as hg; print(hg.kernel.IMPLEMENTATION)"
    env = dict(os.environ, MBDGAME_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_table_bits_bounds():
    assert _kernel_py.table_bits_for(1, 22) == 8
    assert _kernel_py.table_bits_for(15, 22) == 17
    assert _kernel_py.table_bits_for(28, 22) == 22
