"""Substructures of trees, the black/white/gray coloring, and the linear criticality test.

A *substructure* of a tree ``T`` is a subtree ``F`` that is a once-subdivided
tree whose original (black, fixed-degree) vertices keep their full
``T``-degree inside ``F``.  Locally: ``F`` is connected, properly 2-colored
into ``fixed_degree`` and the rest, every non-fixed vertex has degree 2 in
``F``, and every fixed vertex has ``deg_F = deg_T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from mbdgame.graph_core import Graph, InputClassError, PredominatedGraph, require_forest
from mbdgame.hypergraph_game import CapacityError, kernel

ENUMERATION_LIMIT = 20


@dataclass(frozen=True)
class Substructure:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    fixed_degree: frozenset[int]

    @classmethod
    def make(cls, vertices: Iterable[int], edges: Iterable[tuple[int, int]],
             fixed_degree: Iterable[int]) -> "Substructure":
        return cls(frozenset(vertices), frozenset((min(e), max(e)) for e in edges),
                   frozenset(fixed_degree))

    @property
    def white(self) -> frozenset[int]:
        return self.vertices - self.fixed_degree

    def sort_key(self):
        return tuple(sorted(self.vertices))

    def to_dict(self, g: Graph | None = None) -> dict:
        lab = g.label if g is not None else (lambda v: v)
        return {
            "vertices": sorted(lab(v) for v in self.vertices),
            "edges": sorted(sorted((lab(u), lab(v))) for u, v in self.edges),
            "fixed_degree": sorted(lab(v) for v in self.fixed_degree),
        }


@dataclass(frozen=True)
class ColorPartition:
    black: frozenset[int]
    white: frozenset[int]
    gray: frozenset[int]

    def to_dict(self, g: Graph | None = None) -> dict:
        lab = g.label if g is not None else (lambda v: v)
        return {c: sorted(lab(v) for v in getattr(self, c)) for c in ("black", "white", "gray")}


def shape_ok(vertices: frozenset[int], edges: frozenset[tuple[int, int]],
             fixed: frozenset[int]) -> bool:
    """Invariants of a member of the subdivided-tree family, checked locally."""
    if not vertices or not fixed <= vertices:
        return False
    if len(vertices) == 1:
        return not edges and fixed == vertices
    if len(edges) != len(vertices) - 1:
        return False
    deg = {v: 0 for v in vertices}
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        if u not in deg or v not in deg:
            return False
        if (u in fixed) == (v in fixed):
            return False
        deg[u] += 1
        deg[v] += 1
        adj[u].append(v)
        adj[v].append(u)
    if any(deg[v] != 2 for v in vertices - fixed):
        return False
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def is_substructure(g: Graph, f: Substructure) -> bool:
    for v in f.vertices:
        if not 0 <= v < g.n:
            raise IndexError(f"vertex {v} out of range for a graph on {g.n} vertices")
    if not shape_ok(f.vertices, f.edges, f.fixed_degree):
        return False
    if any(not g.has_edge(u, v) for u, v in f.edges):
        return False
    deg_f = {v: 0 for v in f.vertices}
    for u, v in f.edges:
        deg_f[u] += 1
        deg_f[v] += 1
    return all(g.degree(v) == deg_f[v] for v in f.fixed_degree)


# --- rooted DP --------------------------------------------------------------

class _Rooted:
    """BFS rooting of every component of a forest, smallest vertex as root."""

    def __init__(self, t: Graph):
        n = t.n
        self.parent = [-1] * n
        self.order: list[int] = []
        self.roots: list[int] = []
        seen = bytearray(n)
        adj = t.adjacency
        for r in range(n):
            if seen[r]:
                continue
            seen[r] = 1
            self.roots.append(r)
            start = len(self.order)
            self.order.append(r)
            i = start
            while i < len(self.order):
                u = self.order[i]
                i += 1
                for w in adj[u]:
                    if not seen[w]:
                        seen[w] = 1
                        self.parent[w] = u
                        self.order.append(w)
        self.children: list[list[int]] = [[] for _ in range(n)]
        for v in self.order:
            p = self.parent[v]
            if p >= 0:
                self.children[p].append(v)


def _down(t: Graph, rooted: _Rooted, d: frozenset[int]):
    """Bottom-up flags.

    ``black[v]``: v can be a black vertex of a substructure containing none
    of v's ancestors except possibly its parent, with all black vertices
    below outside ``d``.  ``cont[v]``: v (as a white vertex entered from its
    parent) has a child with ``black`` set.
    """
    n = t.n
    black = bytearray(n)
    cont = bytearray(n)
    children = rooted.children
    for v in reversed(rooted.order):
        ch = children[v]
        cont[v] = any(black[g] for g in ch)
        black[v] = v not in d and all(cont[c] for c in ch)
    return black, cont


def _expand(rooted: _Rooted, black, top_blacks: list[int], verts: set[int],
            edges: set[tuple[int, int]], fixed: set[int]) -> None:
    children = rooted.children
    stack = list(top_blacks)
    while stack:
        b = stack.pop()
        verts.add(b)
        fixed.add(b)
        for c in children[b]:
            g = min(x for x in children[c] if black[x])
            verts.add(c)
            edges.add((min(b, c), max(b, c)))
            edges.add((min(c, g), max(c, g)))
            stack.append(g)


def find_substructure_avoiding(t: Graph, d: Iterable[int] = ()) -> Substructure | None:
    """A substructure of the forest ``t`` whose fixed-degree vertices avoid ``d``, if any."""
    require_forest(t)
    d = frozenset(d)
    rooted = _Rooted(t)
    black, _ = _down(t, rooted, d)
    comp_of = {}
    for r in rooted.roots:
        comp_of[r] = r
    for v in rooted.order:
        p = rooted.parent[v]
        if p >= 0:
            comp_of[v] = comp_of[p]
    by_comp: dict[int, list[int]] = {r: [] for r in rooted.roots}
    for v in range(t.n):
        by_comp[comp_of[v]].append(v)
    for r in rooted.roots:
        verts: set[int] = set()
        edges: set[tuple[int, int]] = set()
        fixed: set[int] = set()
        if black[r]:
            _expand(rooted, black, [r], verts, edges, fixed)
            return Substructure.make(verts, edges, fixed)
        for top in by_comp[r]:
            good = [g for g in rooted.children[top] if black[g]]
            if len(good) >= 2:
                g1, g2 = sorted(good)[:2]
                verts.add(top)
                edges.update({(min(top, g1), max(top, g1)), (min(top, g2), max(top, g2))})
                _expand(rooted, black, [g1, g2], verts, edges, fixed)
                return Substructure.make(verts, edges, fixed)
    return None


def staller_tree_witness(pg: PredominatedGraph) -> Substructure | None:
    return find_substructure_avoiding(pg.graph, pg.predominated)


def staller_wins_tree(pg: PredominatedGraph) -> bool:
    """Staller wins on a predominated forest iff some substructure has no fixed vertex in D."""
    return staller_tree_witness(pg) is not None


# --- enumeration ------------------------------------------------------------

def _grow_from(t: Graph, seed: int):
    """Every substructure of the tree ``t`` in which ``seed`` is black."""
    adj = t.adjacency

    def rec(pending: list[tuple[int, int]], verts: frozenset[int],
            edges: frozenset[tuple[int, int]], fixed: frozenset[int]):
        if not pending:
            yield verts, edges, fixed
            return
        (b, came_from), rest = pending[0], pending[1:]
        whites = [u for u in adj[b] if u != came_from]
        choices = []
        for u in whites:
            opts = [g for g in adj[u] if g != b]
            if not opts:
                return
            choices.append((u, opts))

        def pick(i, verts, edges, pend):
            if i == len(choices):
                yield from rec(pend + rest, verts, edges, fixed | {x for x, _ in pend})
                return
            u, opts = choices[i]
            for g in opts:
                yield from pick(i + 1, verts | {u, g},
                                edges | {(min(b, u), max(b, u)), (min(u, g), max(u, g))},
                                pend + [(g, u)])

        yield from pick(0, verts, edges, [])

    yield from rec([(seed, -1)], frozenset([seed]), frozenset(), frozenset([seed]))


def enumerate_substructures(t: Graph, limit: int = ENUMERATION_LIMIT) -> list[Substructure]:
    """All substructures of the forest ``t``, sorted by vertex set.

    Also asserts the compatibility of colorings: a vertex shared by two
    substructures is black in both or white in both.
    """
    require_forest(t)
    if t.n > limit:
        raise CapacityError(f"{t.n} vertices exceeds the enumeration limit of {limit}")
    found: dict[frozenset[int], Substructure] = {}
    for s in range(t.n):
        for verts, edges, fixed in _grow_from(t, s):
            if verts not in found:
                found[verts] = Substructure(verts, edges, fixed)
    out = sorted(found.values(), key=Substructure.sort_key)
    color: dict[int, bool] = {}
    for f in out:
        for v in f.vertices:
            is_black = v in f.fixed_degree
            if color.setdefault(v, is_black) != is_black:
                raise AssertionError(f"vertex {v} is black in one substructure and white in another")
    return out


# --- coloring ---------------------------------------------------------------

def _color_by_enumeration(t: Graph) -> ColorPartition:
    black: set[int] = set()
    white: set[int] = set()
    for f in enumerate_substructures(t):
        black |= f.fixed_degree
        white |= f.white
    gray = set(range(t.n)) - black - white
    return ColorPartition(frozenset(black), frozenset(white), frozenset(gray))


def _color_by_rerooting(t: Graph) -> ColorPartition:
    n = t.n
    rooted = _Rooted(t)
    down_black, down_cont = _down(t, rooted, frozenset())
    parent, children = rooted.parent, rooted.children
    # up_black[v]: parent(v) can be black as seen from v; up_cont[v]: parent(v),
    # entered from v as a white vertex, continues to a black vertex elsewhere
    up_black = bytearray(n)
    up_cont = bytearray(n)
    n_black_nbrs = [0] * n   # neighbors w with B(w -> v)
    n_dead_nbrs = [0] * n    # neighbors u with not G(u -> v)
    for v in rooted.order:
        nb = sum(down_black[c] for c in children[v])
        nd = sum(1 for c in children[v] if not down_cont[c])
        if parent[v] >= 0:
            nb += up_black[v]
            nd += not up_cont[v]
        n_black_nbrs[v] = nb
        n_dead_nbrs[v] = nd
        for c in children[v]:
            up_cont[c] = nb - down_black[c] >= 1
            up_black[c] = nd - (not down_cont[c]) == 0
    black = frozenset(v for v in range(n) if n_dead_nbrs[v] == 0)
    white = frozenset(v for v in range(n) if n_black_nbrs[v] >= 2)
    if black & white:
        raise AssertionError("rerooting produced an incompatible coloring")
    gray = frozenset(range(n)) - black - white
    return ColorPartition(black, white, gray)


def color_vertices(t: Graph, method: str = "auto") -> ColorPartition:
    """Black/white/gray partition of a forest.

    ``method`` is ``"enumerate"``, ``"rerooting"`` or ``"auto"`` (enumeration
    up to the enumeration limit, rerooting beyond it).
    """
    require_forest(t)
    if method == "auto":
        method = "enumerate" if t.n <= ENUMERATION_LIMIT else "rerooting"
    if method == "enumerate":
        return _color_by_enumeration(t)
    if method == "rerooting":
        return _color_by_rerooting(t)
    raise ValueError(f"unknown coloring method {method!r}")


# --- criticality ------------------------------------------------------------

def check_critical_tree(pg: PredominatedGraph) -> tuple[bool, str]:
    """Linear-time criticality test for a predominated forest.

    Returns the verdict and the first condition that failed (``"ok"`` on
    success).  Steps: ``X = V - D``; ``T'`` is induced by the closed
    neighborhoods of ``X``; ``T'`` must be connected, ``X`` must be one side
    of its bipartition, and every vertex on the other side must have degree
    exactly 2 in ``T'``.
    """
    t = pg.graph
    n = t.n
    recognize = getattr(kernel, "recognize_tree", None)
    if recognize is not None:
        offsets, targets = t.csr
        code = recognize(n, offsets, targets, pg.free_mask)
        if code == 1:
            raise InputClassError("input graph is not a forest")
        return code == 0, _REASONS[code]
    return _check_critical_tree_py(pg)


_REASONS = {
    0: "ok",
    2: "no non-predominated vertex",
    3: "T' is disconnected",
    4: "X is not a bipartition class of T'",
    5: "a vertex outside X has degree other than 2 in T'",
}


def _check_critical_tree_py(pg: PredominatedGraph) -> tuple[bool, str]:
    t = pg.graph
    require_forest(t)
    n = t.n
    adj = t.adjacency
    in_x = bytearray(b"\x01") * n
    for v in pg.predominated:
        in_x[v] = 0
    root = in_x.find(1)
    if root < 0:
        return False, "no non-predominated vertex"
    in_tp = bytearray(in_x)
    for x in range(n):
        if in_x[x]:
            for w in adj[x]:
                in_tp[w] = 1
    tp_size = in_tp.count(1)

    # BFS over T' from an X vertex; since T' is a forest, X is a bipartition
    # class iff every BFS edge joins X to non-X
    seen = bytearray(n)
    seen[root] = 1
    queue = [root]
    split = False
    for u in queue:
        xu = in_x[u]
        for w in adj[u]:
            if in_tp[w] and not seen[w]:
                seen[w] = 1
                if in_x[w] == xu:
                    split = True
                queue.append(w)
    if len(queue) != tp_size:
        return False, "T' is disconnected"
    if split:
        return False, "X is not a bipartition class of T'"
    for u in queue:
        if not in_x[u]:
            deg = 0
            for w in adj[u]:
                deg += in_tp[w]
            if deg != 2:
                return False, "a vertex outside X has degree other than 2 in T'"
    return True, "ok"


def is_mbd_critical_tree(pg: PredominatedGraph) -> bool:
    return check_critical_tree(pg)[0]


def is_atomic_mbd_critical_tree(pg: PredominatedGraph) -> bool:
    """Critical, D independent, and no isolated D-vertex."""
    if not is_mbd_critical_tree(pg):
        return False
    g, d = pg.graph, pg.predominated
    for v in d:
        nb = g.adjacency[v]
        if not nb or any(w in d for w in nb):
            return False
    return True


def critical_witness(pg: PredominatedGraph) -> Substructure | None:
    """For a critical forest, the substructure whose fixed-degree set is ``V - D``."""
    if not is_mbd_critical_tree(pg):
        return None
    g, d = pg.graph, pg.predominated
    xs = [v for v in range(g.n) if v not in d]
    verts = set(xs)
    edges = set()
    for x in xs:
        for w in g.adjacency[x]:
            verts.add(w)
            edges.add((min(x, w), max(x, w)))
    return Substructure.make(verts, edges, xs)


__all__ = [
    "ColorPartition", "Substructure", "check_critical_tree", "color_vertices", "critical_witness",
    "enumerate_substructures", "find_substructure_avoiding", "is_atomic_mbd_critical_tree",
    "is_mbd_critical_tree", "is_substructure", "shape_ok", "staller_tree_witness",
    "staller_wins_tree",
]
