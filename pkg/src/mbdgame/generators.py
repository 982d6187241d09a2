"""Constructive critical families and the strategy certificates that come with them.

* subdivided trees, built either by subdividing a tree once or by recursive joins;
* odd-path replacements of edges (two paths: cactus family, k paths: the wider family);
* recursive hypergraph joins through a fresh vertex;
* near-perfect matchings that certify Dominator wins after predominating one black vertex;
* Staller's cut-vertex strategy on replacement graphs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Hashable, Sequence, Union

from mbdgame.graph_core import (Graph, Hypergraph, InputClassError, PredominatedGraph, biconnected_blocks,
                                bipartition, is_cactus, is_tree)
from mbdgame.tree_structures import Substructure, shape_ok


class SpecError(ValueError):
    """A join spec or replacement plan is malformed or refers to a missing selector."""


# --- the subdivided-tree family ---------------------------------------------

def is_in_S(f: Substructure) -> bool:
    return shape_ok(f.vertices, f.edges, f.fixed_degree)


def subdivide_once(t: Graph) -> Substructure:
    """Subdivide every edge of a tree once; original vertices are the fixed-degree set.

    Subdivision vertices get ids ``n, n+1, ...`` in sorted edge order.
    """
    if not is_tree(t):
        raise InputClassError("subdivide_once needs a tree")
    edges = []
    nxt = t.n
    for u, v in t.edges():
        edges += [(u, nxt), (nxt, v)]
        nxt += 1
    return Substructure.make(range(nxt), edges, range(t.n))


def substructure_graph(f: Substructure) -> Graph:
    n = len(f.vertices)
    if f.vertices != frozenset(range(n)):
        raise ValueError("substructure vertices are not 0..n-1")
    return Graph.from_edges(n, f.edges)


@dataclass(frozen=True)
class Leaf:
    pass


@dataclass(frozen=True)
class Join:
    left: "JoinSpec"
    left_sel: Hashable
    right: "JoinSpec"
    right_sel: Hashable


JoinSpec = Union[Leaf, Join]


def parse_join_spec(text: str, leaf_name: str) -> JoinSpec:
    """Parse the nested-list grammar.

    ``spec := "<leaf>" | [spec, selector, spec, selector]`` in JSON syntax, where
    ``<leaf>`` is ``P1`` for subdivided trees and ``H1`` for hypergraph joins.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"join spec is not valid JSON: {exc}") from None

    def conv(node):
        if node == leaf_name:
            return Leaf()
        if isinstance(node, list) and len(node) == 4:
            return Join(conv(node[0]), _selector(node[1]), conv(node[2]), _selector(node[3]))
        raise SpecError(f"bad join spec node {node!r}; expected {leaf_name!r} or a 4-element list")

    return conv(raw)


def _selector(x):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SpecError(f"selector must be an integer or a string, got {x!r}")
    return x


def render_join_spec(spec: JoinSpec, leaf_name: str) -> str:
    def conv(node):
        if isinstance(node, Leaf):
            return leaf_name
        return [conv(node.left), node.left_sel, conv(node.right), node.right_sel]

    return json.dumps(conv(spec), separators=(",", ":"))


def build_S(spec: JoinSpec) -> Substructure:
    """Join two members through a new white vertex attached to one fixed vertex of each.

    Numbering: the left operand keeps its ids, the right operand is shifted
    past it, and the joining vertex comes last.
    """
    if isinstance(spec, Leaf):
        return Substructure.make([0], [], [0])
    a = build_S(spec.left)
    b = build_S(spec.right)
    if spec.left_sel not in a.fixed_degree:
        raise SpecError(f"selector {spec.left_sel!r} is not a fixed-degree vertex of the left operand")
    if spec.right_sel not in b.fixed_degree:
        raise SpecError(f"selector {spec.right_sel!r} is not a fixed-degree vertex of the right operand")
    off = len(a.vertices)
    z = off + len(b.vertices)
    verts = set(a.vertices) | {v + off for v in b.vertices} | {z}
    edges = set(a.edges) | {(u + off, v + off) for u, v in b.edges}
    edges |= {(spec.left_sel, z), (spec.right_sel + off, z)}
    fixed = set(a.fixed_degree) | {v + off for v in b.fixed_degree}
    return Substructure.make(verts, edges, fixed)


def build_L(spec: JoinSpec) -> Hypergraph:
    """Hypergraph joins: a new vertex is added to one chosen edge of each operand.

    Leaf edges are keyed by the leaf's position in a left-to-right walk; a
    modified edge keeps its key with ``/<join index>`` appended, where joins
    are numbered in post-order.  A selector is an edge key (string) or an
    index into the operand's edges in ascending key order (integer).
    """
    counters = {"leaf": 0, "join": 0}

    def rec(node) -> Hypergraph:
        if isinstance(node, Leaf):
            key = str(counters["leaf"])
            counters["leaf"] += 1
            return Hypergraph(1, {key: frozenset([0])})
        a = rec(node.left)
        b = rec(node.right)
        j = counters["join"]
        counters["join"] += 1
        ka = _resolve_edge(a, node.left_sel, "left")
        kb = _resolve_edge(b, node.right_sel, "right")
        off = a.n
        z = a.n + b.n
        edges: dict = {}
        for k, e in a.edges.items():
            edges[f"{k}/{j}" if k == ka else k] = e | {z} if k == ka else e
        for k, e in b.edges.items():
            shifted = frozenset(v + off for v in e)
            edges[f"{k}/{j}" if k == kb else k] = shifted | {z} if k == kb else shifted
        return Hypergraph(z + 1, edges)

    return rec(spec)


def _resolve_edge(h: Hypergraph, sel, side: str):
    if isinstance(sel, int):
        keys = h.keys()
        if not 0 <= sel < len(keys):
            raise SpecError(f"{side} selector index {sel} out of range ({len(keys)} edges)")
        return keys[sel]
    if sel not in h.edges:
        raise SpecError(f"{side} selector {sel!r} is not an edge key of the operand")
    return sel


def random_join_spec(rng: random.Random, joins: int, kind: str) -> JoinSpec:
    """Random spec with exactly ``joins`` join nodes; selectors valid by construction."""
    if joins == 0:
        return Leaf()
    k = rng.randrange(joins)
    left = random_join_spec(rng, k, kind)
    right = random_join_spec(rng, joins - 1 - k, kind)
    if kind == "S":
        lx = sorted(build_S(left).fixed_degree)
        rx = sorted(build_S(right).fixed_degree)
        return Join(left, rng.choice(lx), right, rng.choice(rx))
    if kind == "L":
        return Join(left, rng.randrange(joins_edges(left)), right, rng.randrange(joins_edges(right)))
    raise ValueError(f"unknown spec kind {kind!r}")


def joins_edges(spec: JoinSpec) -> int:
    """Edge count of ``build_L(spec)``: every join keeps the edge count additive."""
    if isinstance(spec, Leaf):
        return 1
    return joins_edges(spec.left) + joins_edges(spec.right)


# --- odd-path replacements --------------------------------------------------

@dataclass(frozen=True)
class ReplacementStep:
    edge: tuple[int, int]
    lengths: tuple[int, ...]


@dataclass(frozen=True)
class ReplacementPlan:
    steps: tuple[ReplacementStep, ...] = ()

    @classmethod
    def of(cls, steps: Sequence[tuple[int, int, Sequence[int]]]) -> "ReplacementPlan":
        return cls(tuple(ReplacementStep((int(a), int(b)), tuple(int(x) for x in ls))
                         for a, b, ls in steps))

    def to_text(self) -> str:
        return json.dumps([[s.edge[0], s.edge[1], list(s.lengths)] for s in self.steps],
                          separators=(",", ":"))


def parse_plan(text: str) -> ReplacementPlan:
    """``[[u, v, [l1, l2, ...]], ...]`` in JSON syntax."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"replacement plan is not valid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise SpecError("replacement plan must be a list of steps")
    steps = []
    for item in raw:
        if (not isinstance(item, list) or len(item) != 3 or not isinstance(item[2], list)
                or not all(isinstance(x, int) for x in [item[0], item[1], *item[2]])):
            raise SpecError(f"bad plan step {item!r}; expected [u, v, [lengths...]]")
        steps.append((item[0], item[1], item[2]))
    return ReplacementPlan.of(steps)


@dataclass(frozen=True)
class Built:
    """A replacement graph together with the trace needed by the certificates.

    ``paths[i]`` lists, for step ``i``, every replacement path as a full
    vertex sequence from ``edge[0]`` to ``edge[1]``.
    """

    graph: Graph
    fixed_degree: frozenset[int]
    base: Substructure
    plan: ReplacementPlan = ReplacementPlan()
    paths: tuple[tuple[tuple[int, ...], ...], ...] = ()
    labels: tuple[int, ...] | None = field(default=None, compare=False)

    @property
    def predominated(self) -> frozenset[int]:
        return frozenset(range(self.graph.n)) - self.fixed_degree

    def predominated_graph(self) -> PredominatedGraph:
        g = self.graph
        if self.labels is not None:
            g = Graph(g.n, g.adjacency, self.labels)
        return PredominatedGraph(g, self.predominated)

    def created_at(self) -> dict[int, int]:
        """Step index that created each non-base vertex."""
        out = {}
        for i, ps in enumerate(self.paths):
            for p in ps:
                for v in p[1:-1]:
                    out[v] = i
        return out


def apply_replacements(f: Substructure, plan: ReplacementPlan = ReplacementPlan(),
                       family: str = "A", labels: Sequence[int] | None = None) -> Built:
    """Replace edges by internally disjoint odd paths, step by step.

    ``family="C"`` restricts to two paths per step on edges of ``f`` (each
    replaced at most once); ``"A"`` allows ``k >= 2`` paths on any edge
    present when the step applies.  A step with lengths ``(1, 1)`` is a
    2-cycle and leaves the edge as it is.  New vertices are numbered in
    step order, then path order, walking each path from ``edge[0]``.
    """
    if not is_in_S(f):
        raise SpecError("base is not a subdivided tree with its fixed-degree set")
    n0 = len(f.vertices)
    if f.vertices != frozenset(range(n0)):
        raise SpecError("base vertices must be 0..n-1")
    if family not in ("A", "C"):
        raise ValueError(f"unknown family {family!r}")
    base_edges = set(f.edges)
    edges = set(f.edges)
    nxt = n0
    all_paths = []
    replaced = set()
    for i, step in enumerate(plan.steps):
        a, b = step.edge
        e = (min(a, b), max(a, b))
        ls = step.lengths
        if len(ls) < 2:
            raise SpecError(f"step {i}: need at least two paths")
        if any(x < 1 or x % 2 == 0 for x in ls):
            raise SpecError(f"step {i}: path lengths must be odd and positive, got {list(ls)}")
        if ls.count(1) > 1 and ls != (1, 1):
            raise SpecError(f"step {i}: more than one length-1 path")
        if e not in edges:
            raise SpecError(f"step {i}: edge {a}-{b} is not present")
        if family == "C":
            if len(ls) != 2:
                raise SpecError(f"step {i}: cactus replacements use exactly two paths")
            if e not in base_edges or e in replaced:
                raise SpecError(f"step {i}: cactus replacements act once on edges of the base tree")
        replaced.add(e)
        paths = []
        if ls == (1, 1):
            paths = [(a, b), (a, b)]
        else:
            edges.discard(e)
            for length in ls:
                inner = list(range(nxt, nxt + length - 1))
                nxt += length - 1
                p = (a, *inner, b)
                for u, v in zip(p, p[1:]):
                    edges.add((min(u, v), max(u, v)))
                paths.append(p)
        all_paths.append(tuple(paths))
    g = Graph.from_edges(nxt, edges)
    side = bipartition(g)
    anchor = min(f.fixed_degree)
    fixed = frozenset(v for v in range(nxt) if side[v] == side[anchor])
    if not fixed >= f.fixed_degree:
        raise AssertionError("replacement broke the bipartition")
    out_labels = None
    if labels is not None:
        if len(labels) != n0:
            raise ValueError("labels must name every base vertex")
        top = max(labels)
        out_labels = tuple(labels) + tuple(range(top + 1, top + 1 + nxt - n0))
    return Built(g, fixed, f, plan, tuple(all_paths), out_labels)


def built_from_S(f: Substructure) -> Built:
    return apply_replacements(f)


# --- matchings --------------------------------------------------------------

def _tree_matching(f: Substructure, x: int) -> dict[int, int]:
    adj: dict[int, list[int]] = {v: [] for v in f.vertices}
    for u, v in f.edges:
        adj[u].append(v)
        adj[v].append(u)
    partner: dict[int, int] = {}
    parent = {x: -1}
    stack = [x]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                stack.append(w)
    for v in f.fixed_degree:
        if v != x:
            p = parent[v]
            partner[v], partner[p] = p, v
    return partner


def _pair(partner: dict[int, int], seq: Sequence[int]) -> None:
    for i in range(0, len(seq) - 1, 2):
        u, v = seq[i], seq[i + 1]
        partner[u], partner[v] = v, u


def _unpair(partner: dict[int, int], u: int) -> None:
    v = partner.pop(u, None)
    if v is not None:
        partner.pop(v, None)


def matching_except(built: Built, x: int) -> frozenset[tuple[int, int]]:
    """A matching of ``built.graph`` covering every vertex except the black vertex ``x``.

    On the base tree: root at ``x`` and match each black vertex to its parent.
    Each replacement step then extends the matching.  If the replaced edge
    was matched, one path carries the matching from end to end; otherwise
    only internal path vertices are paired.  A vertex created by a step is
    handled by matching around the step's black endpoint first and then
    shifting the pairs along the path that contains ``x``.
    """
    if x not in built.fixed_degree:
        raise ValueError(f"vertex {x} is not a fixed-degree (black) vertex")
    created = built.created_at()

    def at(step: int, target: int) -> dict[int, int]:
        if step < 0:
            return _tree_matching(built.base, target)
        paths = built.paths[step]
        a, b = built.plan.steps[step].edge
        if created.get(target) == step:
            c = a if a in built.fixed_degree else b
            partner = at(step - 1, c)
            for p in paths:
                if target in p:
                    seq = p if p[0] == c else p[::-1]
                    t = seq.index(target)
                    _pair(partner, seq[:t])
                    _pair(partner, seq[t + 1:-1])
                else:
                    _pair(partner, p[1:-1])
            return partner
        partner = at(step - 1, target)
        if len(paths[0]) == 2 and len(paths) == 2 and len(paths[1]) == 2:
            return partner  # collapsed 2-cycle
        if partner.get(a) == b:
            _unpair(partner, a)
            direct = next((i for i, p in enumerate(paths) if len(p) == 2), None)
            carrier = direct if direct is not None else 0
            for i, p in enumerate(paths):
                if i == carrier:
                    _pair(partner, p)
                else:
                    _pair(partner, p[1:-1])
        else:
            for p in paths:
                _pair(partner, p[1:-1])
        return partner

    partner = at(len(built.paths) - 1, x)
    return frozenset((u, v) for u, v in partner.items() if u < v)


def is_near_perfect_matching(g: Graph, pairs, x: int) -> bool:
    """Pairs are host edges, pairwise disjoint, and cover exactly ``V - {x}``."""
    covered: set[int] = set()
    for u, v in pairs:
        if not g.has_edge(u, v) or u in covered or v in covered:
            return False
        covered |= {u, v}
    return covered == set(range(g.n)) - {x}


# --- Staller's cut-vertex strategy ------------------------------------------

def _parts(adj, region: set[int], cut: int) -> list[set[int]]:
    rest = region - {cut}
    out = []
    while rest:
        s = min(rest)
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in rest and w not in comp:
                    comp.add(w)
                    stack.append(w)
        rest -= comp
        out.append(comp)
    return out


def staller_strategy(g: Graph, fixed_degree) -> callable:
    """Deterministic Staller (Maker) strategy for ``(g, V - fixed_degree)``.

    Staller keeps a *live* region.  When it is a single black vertex, she
    claims it.  Otherwise she claims the lowest-id white vertex whose
    removal splits the region into at least two parts that each contain a
    black vertex, then moves on to a part Dominator did not answer in.
    The returned callable follows the :func:`mbdgame.hypergraph_game.play`
    convention ``f(n, maker, breaker, last)``.
    """
    fixed = frozenset(fixed_degree)
    adj = g.adjacency
    state = {"live": set(range(g.n)), "parts": None}

    def move(n, maker, breaker, last):
        parts = state["parts"]
        if parts is not None:
            untouched = [p for p in parts if last not in p]
            state["live"] = min(untouched, key=min)
            state["parts"] = None
        live = state["live"]
        if len(live) == 1:
            (v,) = live
            if v not in fixed:
                raise RuntimeError("live region collapsed to a white vertex")
            return v
        for u in sorted(live - fixed):
            ps = _parts(adj, live, u)
            if len(ps) >= 2 and all(p & fixed for p in ps):
                state["parts"] = ps
                return u
        raise RuntimeError(f"no splitting white vertex in live region {sorted(live)}")

    return move


def check_substructure_in_graph(g: Graph, h: Graph, x_set, mapping) -> bool:
    """Does ``h`` (fixed-degree set ``x_set``) sit inside ``g`` under ``mapping``?

    ``mapping`` sends each vertex of ``h`` to a vertex of ``g`` (a sequence
    indexed by ``h``'s ids or a dict).  Every mapped edge must exist in ``g``
    and every fixed-degree vertex must have the same degree in both graphs.
    """
    m = [mapping[v] for v in range(h.n)]
    if any(not 0 <= w < g.n for w in m):
        raise ValueError("mapping leaves the host graph")
    if len(set(m)) != len(m):
        raise ValueError("mapping is not injective")
    if not all(g.has_edge(m[u], m[v]) for u, v in h.edges()):
        return False
    return all(g.degree(m[x]) == h.degree(x) for x in x_set)


# --- random family members --------------------------------------------------

def random_tree(rng: random.Random, n: int) -> Graph:
    """Tree from a uniform random parent array (vertex i > 0 attaches below i)."""
    return Graph.from_edges(n, [(rng.randrange(i), i) for i in range(1, n)])


def random_replacement_member(rng: random.Random, family: str, max_vertices: int = 16) -> Built:
    """Random member of the cactus (``"C"``) or k-path (``"A"``) family.

    Base: subdivision of a random tree on at least two vertices.  Edges are replaced at random with
    lengths drawn from {1, 3, 5} (never two 1s); ``k`` is 2 for ``"C"`` and
    2 or 3 for ``"A"``.  Steps that would exceed ``max_vertices`` are skipped.
    """
    # leave room for at least one replacement beyond the subdivided base
    tree_n = rng.randint(2, max(2, (max_vertices + 1) // 2 - 2))
    f = subdivide_once(random_tree(rng, tree_n))
    steps: list[tuple[int, int, list[int]]] = []
    total = len(f.vertices)
    current = apply_replacements(f, ReplacementPlan(), family)
    candidates = sorted(f.edges)
    rng.shuffle(candidates)
    for e in candidates:
        if rng.random() < 0.3:
            continue
        k = 2 if family == "C" else rng.choice([2, 3])
        for _ in range(10):
            ls = [rng.choice([1, 3, 5]) for _ in range(k)]
            if ls.count(1) <= 1:
                break
        else:
            continue
        extra = sum(x - 1 for x in ls)
        if total + extra > max_vertices:
            continue
        present = current.graph.edges()
        if family == "A" and rng.random() < 0.3:
            e = rng.choice(present)  # may hit an edge created by an earlier step
        elif e not in present:
            continue
        steps.append((e[0], e[1], ls))
        total += extra
        current = apply_replacements(f, ReplacementPlan.of(steps), family)
    return current


def find_cactus_substructure(g: Graph, d) -> Built | None:
    """Match a cactus-family substructure with fixed-degree set ``V - d`` without a trace.

    With ``X = V - d`` forced, the candidate is the subgraph of all edges
    touching ``X``.  It is accepted when ``X`` is independent, the candidate
    is a connected cactus, and contracting each cycle back to a single edge
    (between its white vertex of degree > 2 and a black vertex, the black
    branch vertex when there is one) yields a subdivided tree with fixed set
    ``X``.  The returned :class:`Built` carries a reconstructed trace.
    """
    d = frozenset(d)
    xs = [v for v in range(g.n) if v not in d]
    if not xs:
        return None
    xset = set(xs)
    h_edges = set()
    for x in xs:
        for w in g.adjacency[x]:
            if w in xset:
                return None
            h_edges.add((min(x, w), max(x, w)))
    verts = sorted(set(xs) | {v for e in h_edges for v in e})
    if len(verts) == 1:
        if g.degree(verts[0]) != 0:
            return None
        f = Substructure.make([0], [], [0])
        return Built(Graph.from_edges(1, []), frozenset([0]), f)
    idx = {v: i for i, v in enumerate(verts)}
    h = Graph.from_edges(len(verts), [(idx[u], idx[v]) for u, v in h_edges])
    if not is_cactus(h):
        return None
    black = {idx[x] for x in xs}
    deg = [h.degree(v) for v in range(h.n)]
    tree_edges = []
    cycles = []
    for block in biconnected_blocks(h):
        if len(block) == 1:
            tree_edges.append(block[0])
            continue
        bverts = sorted({v for e in block for v in e})
        high = [v for v in bverts if deg[v] > 2]
        hi_white = [v for v in high if v not in black]
        hi_black = [v for v in high if v in black]
        if len(hi_white) != 1 or len(hi_black) > 1:
            return None
        y = hi_white[0]
        xb = hi_black[0] if hi_black else min(v for v in bverts if v in black)
        cycles.append((xb, y, block))
    # contract: keep tree edges, replace each cycle by the edge xb-y
    keep = set()
    for u, v in tree_edges:
        keep |= {u, v}
    for xb, y, _ in cycles:
        keep |= {xb, y}
    if not keep:
        return None
    keep_sorted = sorted(keep)
    fidx = {v: i for i, v in enumerate(keep_sorted)}
    f_edges = [(fidx[u], fidx[v]) for u, v in tree_edges] + [(fidx[a], fidx[b]) for a, b, _ in cycles]
    f = Substructure.make(range(len(keep_sorted)), f_edges, [fidx[v] for v in keep_sorted if v in black])
    if not is_in_S(f):
        return None
    # every black vertex of H must survive or lie on a cycle; every vertex is covered
    covered = set(keep)
    for _, _, block in cycles:
        covered |= {v for e in block for v in e}
    if covered != set(range(h.n)):
        return None
    # rebuild through the generator so the result carries a trace
    steps = []
    for xb, y, block in cycles:
        adj: dict[int, list[int]] = {}
        for u, v in block:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        lengths = []
        for start in adj[xb]:
            prev, cur, length = xb, start, 1
            while cur != y:
                nxt = next(w for w in adj[cur] if w != prev)
                prev, cur = cur, nxt
                length += 1
            lengths.append(length)
        steps.append((fidx[xb], fidx[y], sorted(lengths)))
    built = apply_replacements(f, ReplacementPlan.of(steps), "C")
    if len(built.graph.edges()) != len(h_edges):
        return None
    return built


__all__ = [
    "Built", "Join", "JoinSpec", "Leaf", "ReplacementPlan", "ReplacementStep", "SpecError",
    "apply_replacements", "build_L", "build_S", "built_from_S", "check_substructure_in_graph", "find_cactus_substructure",
    "is_in_S", "is_near_perfect_matching", "joins_edges", "matching_except", "parse_join_spec",
    "parse_plan", "random_join_spec", "random_replacement_member", "random_tree",
    "render_join_spec", "search_cactus_counterexample", "staller_strategy", "subdivide_once",
    "substructure_graph", "CactusSearchReport", "random_cactus",
]


# --- searching small predominated cacti ----------------------------------------

@dataclass
class CactusSearchReport:
    max_n: int
    mode: str
    seed: int | None
    budget: int
    examined: int = 0
    graphs: int = 0
    critical: int = 0
    matched: int = 0
    unmatched_critical: list = field(default_factory=list)
    matched_not_critical: list = field(default_factory=list)
    budget_exhausted: bool = False

    def to_dict(self) -> dict:
        if self.unmatched_critical or self.matched_not_critical:
            summary = ("instances listed for inspection; an unmatched critical cactus is "
                       "not a counterexample without a full witness")
        else:
            summary = "none found"
        return {
            "max_n": self.max_n,
            "mode": self.mode,
            "seed": self.seed,
            "budget": self.budget,
            "graphs": self.graphs,
            "examined": self.examined,
            "critical": self.critical,
            "matched": self.matched,
            "unmatched_critical": self.unmatched_critical,
            "matched_not_critical": self.matched_not_critical,
            "budget_exhausted": self.budget_exhausted,
            "summary": summary,
        }


ATLAS_MAX_N = 7


def _atlas_cacti(max_n: int):
    import networkx as nx

    for gx in nx.graph_atlas_g():
        n = gx.number_of_nodes()
        if n == 0 or n > max_n:
            continue
        g = Graph.from_edges(n, list(gx.edges()))
        if is_cactus(g):
            yield g


def random_cactus(rng: random.Random, n: int, chord_tries: int = 3) -> Graph:
    """Random tree plus a few random chords, each kept only if the graph stays a cactus."""
    g = random_tree(rng, n)
    edges = set(g.edges())
    for _ in range(chord_tries if n >= 3 else 0):
        u, v = rng.sample(range(n), 2)
        e = (min(u, v), max(u, v))
        if e in edges:
            continue
        trial = Graph.from_edges(n, edges | {e})
        if is_cactus(trial):
            edges.add(e)
    return Graph.from_edges(n, edges)


def search_cactus_counterexample(max_n: int, budget: int = 100_000, seed: int | None = None,
                                 limit: int = 28) -> CactusSearchReport:
    """Look for critical predominated cacti without a matching cactus substructure.

    Up to ``ATLAS_MAX_N`` vertices every connected cactus from the graph
    atlas is paired with every ``D``; beyond that, random cacti with random
    ``D`` are drawn from ``seed``.  Each instance is checked by the game
    oracle and by :func:`find_cactus_substructure`.  Matched instances that
    are not critical would contradict the corollary and are listed too.
    """
    from mbdgame.hypergraph_game import is_mbd_critical

    if max_n > limit:
        raise ValueError(f"max_n={max_n} exceeds the solver limit of {limit}")
    mode = "exhaustive" if max_n <= ATLAS_MAX_N else "sampled"
    report = CactusSearchReport(max_n, mode, seed if mode == "sampled" else None, budget)
    if max_n <= 0:
        return report

    def examine(g: Graph, d: frozenset[int]) -> None:
        pg = PredominatedGraph(g, d)
        crit = is_mbd_critical(pg, limit=limit)
        match = find_cactus_substructure(g, d)
        report.examined += 1
        report.critical += crit
        report.matched += match is not None
        if crit and match is None:
            report.unmatched_critical.append(_instance_text(pg))
        if match is not None and not crit:
            report.matched_not_critical.append(_instance_text(pg))

    if mode == "exhaustive":
        for g in _atlas_cacti(max_n):
            report.graphs += 1
            for bits in range(1 << g.n):
                if report.examined >= budget:
                    report.budget_exhausted = True
                    return report
                examine(g, frozenset(v for v in range(g.n) if bits >> v & 1))
        return report
    rng = random.Random(seed)
    while report.examined < budget:
        n = rng.randint(1, max_n)
        g = random_cactus(rng, n)
        report.graphs += 1
        examine(g, frozenset(v for v in range(n) if rng.random() < 0.5))
    report.budget_exhausted = True
    return report


def _instance_text(pg: PredominatedGraph) -> str:
    return render_graph(pg)
