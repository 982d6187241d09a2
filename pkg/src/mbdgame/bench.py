"""Benchmarks: recognizer scaling on large random trees, compiled vs pure-Python solver."""

from __future__ import annotations

import csv
import gc
import io
import math
import random
import statistics
import time
from dataclasses import dataclass
from typing import Sequence

from mbdgame import _kernel_py
from mbdgame import hypergraph_game as hg
from mbdgame.graph_core import Graph, Hypergraph, PredominatedGraph, closed_neighborhood_hypergraph
from mbdgame.tree_structures import check_critical_tree

DEFAULT_SIZES = tuple(2 ** k for k in range(10, 21))


def critical_random_tree(n: int, seed: int) -> PredominatedGraph:
    """A critical predominated tree on exactly ``n`` vertices.

    A random tree on ``m`` vertices (random parent array) is subdivided once,
    giving ``2m - 1`` vertices; the subdivision vertices form ``D``.  For
    even ``n`` one extra ``D`` leaf hangs off a subdivision vertex, which
    keeps the instance critical.  Critical inputs make the recognizer run
    every phase to completion.
    """
    if n < 1 or n == 2:
        raise ValueError("no critical tree on this many vertices is built here (n must be 1 or >= 3)")
    rng = random.Random(seed)
    m = (n + 1) // 2
    edges = []
    nxt = m
    for i in range(1, m):
        p = rng.randrange(i)
        edges.append((p, nxt))
        edges.append((nxt, i))
        nxt += 1
    d = list(range(m, nxt))
    if nxt < n:
        edges.append((m, nxt))
        d.append(nxt)
        nxt += 1
    return PredominatedGraph(Graph.from_edges(nxt, edges), frozenset(d))


@dataclass(frozen=True)
class ScalingRow:
    n: int
    prep_ms: float
    median_ms: float
    ratio: float | None


def recognizer_scaling(sizes: Sequence[int] = DEFAULT_SIZES, repetitions: int = 5,
                       seed: int = 0, min_total: float = 0.2) -> list[ScalingRow]:
    """Recognizer runtime per size and the ratio to the previous size.

    The first call on each instance also builds the compressed adjacency and
    the predominated-set mask; that one-off cost is reported as ``prep_ms``.
    Each size then gets at least ``repetitions`` calls and ``min_total``
    seconds (at most 1000 calls).  Calls are interleaved round-robin across
    sizes so that a burst of machine load hits every size alike rather than
    skewing one ratio.  Garbage collection is paused while timing.
    """
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be ascending")
    instances = []
    preps = []
    times: list[tuple[list[float], int]] = []
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        for n in sizes:
            pg = critical_random_tree(n, seed)
            t0 = time.perf_counter()
            ok, _ = check_critical_tree(pg)
            prep = time.perf_counter() - t0
            if not ok:
                raise AssertionError("benchmark instance is not critical")
            t0 = time.perf_counter()
            check_critical_tree(pg)
            first = max(time.perf_counter() - t0, 1e-9)
            instances.append(pg)
            preps.append(prep)
            want = min(1000, max(repetitions, math.ceil(min_total / first)))
            times.append(([first], want))
        for r in range(1, max((w for _, w in times), default=0)):
            for pg, (samples, want) in zip(instances, times):
                if r < want:
                    t0 = time.perf_counter()
                    check_critical_tree(pg)
                    samples.append(time.perf_counter() - t0)
    finally:
        if was_enabled:
            gc.enable()
    rows: list[ScalingRow] = []
    prev = None
    for n, prep, (samples, _) in zip(sizes, preps, times):
        med = statistics.median(samples) * 1000.0
        rows.append(ScalingRow(n, prep * 1000.0, med, med / prev if prev else None))
        prev = med
    return rows


def scaling_csv(rows: Sequence[ScalingRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "prep_ms", "median_ms", "ratio"])
    for r in rows:
        w.writerow([r.n, f"{r.prep_ms:.3f}", f"{r.median_ms:.4f}",
                    "" if r.ratio is None else f"{r.ratio:.3f}"])
    return buf.getvalue()


@dataclass(frozen=True)
class SolverRow:
    instance: str
    n: int
    implementation: str
    median_ms: float
    nodes: int
    winner: str


def solver_instances() -> dict[str, Hypergraph]:
    from mbdgame.fixtures import load_fixture
    from mbdgame.generators import ReplacementPlan, apply_replacements
    from mbdgame.tree_structures import Substructure

    out = {}
    for name in ("fig2_tree", "fig6b_dominator_critical", "r_star", "fig3_bottom", "fig3_top"):
        out[name] = closed_neighborhood_hypergraph(load_fixture(name))
    base = load_fixture("fig3_bottom")
    g = base.graph
    f = Substructure.make(range(g.n), g.edges(), set(range(g.n)) - base.predominated)
    h1 = apply_replacements(f, ReplacementPlan.of([(g.id_of(1), g.id_of(2), [3, 3])]), "C")
    out["H1"] = closed_neighborhood_hypergraph(h1.predominated_graph())
    return out


def solver_comparison(repetitions: int = 3, include_python: bool = True) -> list[SolverRow]:
    impls = []
    if hg._ext is not None:
        impls.append(hg._ext)
    if include_python or not impls:
        impls.append(_kernel_py)
    rows = []
    for name, h in solver_instances().items():
        for impl in impls:
            times = []
            verdict = None
            for _ in range(repetitions):
                t0 = time.perf_counter()
                verdict = hg.solve(h, impl=impl)
                times.append(time.perf_counter() - t0)
            rows.append(SolverRow(name, h.n, impl.IMPLEMENTATION, statistics.median(times) * 1000.0,
                                  verdict.nodes_expanded, verdict.winner.value))
    return rows


def solver_csv(rows: Sequence[SolverRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", "n", "implementation", "median_ms", "nodes", "winner"])
    for r in rows:
        w.writerow([r.instance, r.n, r.implementation, f"{r.median_ms:.3f}", r.nodes, r.winner])
    return buf.getvalue()


def main() -> None:
    print(solver_csv(solver_comparison()))
    print(scaling_csv(recognizer_scaling()))


if __name__ == "__main__":
    main()
