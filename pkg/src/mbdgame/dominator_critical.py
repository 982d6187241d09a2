"""Dominator-criticality of predominated trees through minimal transversals.

For a tree ``T`` the associated hypergraph has one edge per substructure,
namely its set of black vertices.  ``(T, D)`` with ``D`` nonempty is
Dominator-critical exactly when that hypergraph has an edge and ``D`` is a
minimal transversal of it.

Unlike the game hypergraphs, edges here are deduplicated by vertex set:
transversality depends only on the set family.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from mbdgame.graph_core import Graph, Hypergraph, InputClassError, is_tree
from mbdgame.hypergraph_game import CapacityError
from mbdgame.tree_structures import ENUMERATION_LIMIT, enumerate_substructures

TRANSVERSAL_EDGE_LIMIT = 16
DEFAULT_CAP = 1000


@dataclass(frozen=True)
class AssociatedHypergraph:
    base: Hypergraph

    @property
    def empty(self) -> bool:
        return not self.base.edges


@dataclass(frozen=True)
class Transversal:
    vertices: frozenset[int]


@dataclass(frozen=True)
class TransversalEnumeration:
    transversals: tuple[Transversal, ...]
    truncated: bool


def associated_hypergraph(t: Graph, limit: int = ENUMERATION_LIMIT) -> AssociatedHypergraph:
    """Edges are black sets of substructures, keyed by the index of their first occurrence."""
    if not is_tree(t):
        raise InputClassError("the associated hypergraph is defined for trees")
    edges: dict[int, frozenset[int]] = {}
    seen: set[frozenset[int]] = set()
    for i, f in enumerate(enumerate_substructures(t, limit)):
        if f.fixed_degree not in seen:
            seen.add(f.fixed_degree)
            edges[i] = f.fixed_degree
    return AssociatedHypergraph(Hypergraph(t.n, edges))


def is_transversal(h: Hypergraph, y: Iterable[int]) -> bool:
    ys = frozenset(y)
    return all(e & ys for e in h.edges.values())


def is_minimal_transversal(h: Hypergraph, y: Iterable[int]) -> bool:
    """Hits every edge, and every member has a private edge hit by nothing else in ``y``."""
    ys = frozenset(y)
    if not is_transversal(h, ys):
        return False
    private = set()
    for e in h.edges.values():
        hit = e & ys
        if len(hit) == 1:
            private |= hit
    return private == ys


def enumerate_minimal_transversals(h: Hypergraph, cap: int = DEFAULT_CAP,
                                   max_edges: int = TRANSVERSAL_EDGE_LIMIT) -> TransversalEnumeration:
    """All minimal transversals by include/exclude branching.

    Vertices are decided in order of descending edge-degree (ties by id),
    including before excluding.  A branch dies when some edge has all its
    vertices excluded, or when an included vertex can no longer keep a
    private edge.  Output order is the order of discovery; at most ``cap``
    transversals are returned and ``truncated`` says whether more exist.
    """
    edges = list(h.edges.values())
    if len(edges) > max_edges:
        raise CapacityError(f"{len(edges)} edges exceeds the transversal limit of {max_edges}")
    order = sorted(set().union(*edges), key=lambda v: (-h.degree(v), v)) if edges else []
    pos = {v: i for i, v in enumerate(order)}
    # an edge is dead once every vertex in it has been decided and excluded
    last_pos = [max(pos[v] for v in e) for e in edges]
    out: list[Transversal] = []
    truncated = False

    def can_keep_private(v: int, chosen: frozenset[int]) -> bool:
        return any(v in e and not (e & chosen) - {v} for e in edges)

    def rec(i: int, chosen: frozenset[int]) -> bool:
        nonlocal truncated
        if any(last_pos[j] < i and not (e & chosen) for j, e in enumerate(edges)):
            return True
        if any(not can_keep_private(v, chosen) for v in chosen):
            return True
        if i == len(order):
            if is_minimal_transversal(h, chosen):
                if len(out) == cap:
                    truncated = True
                    return False
                out.append(Transversal(chosen))
            return True
        v = order[i]
        return rec(i + 1, chosen | {v}) and rec(i + 1, chosen)

    rec(0, frozenset())
    return TransversalEnumeration(tuple(out), truncated)


def is_dominator_critical_tree(t: Graph, d: Iterable[int]) -> bool:
    """Transversal test: the associated hypergraph is nonempty and ``d`` is a minimal transversal."""
    ds = frozenset(d)
    if not ds:
        raise ValueError("Dominator-criticality requires a nonempty predominated set")
    if t.n > ENUMERATION_LIMIT:
        raise CapacityError(f"{t.n} vertices exceeds the enumeration limit of {ENUMERATION_LIMIT}")
    ah = associated_hypergraph(t)
    if ah.empty:
        return False
    return is_minimal_transversal(ah.base, ds)


__all__ = [
    "AssociatedHypergraph", "Transversal", "TransversalEnumeration", "associated_hypergraph",
    "enumerate_minimal_transversals", "is_dominator_critical_tree", "is_minimal_transversal",
    "is_transversal",
]
