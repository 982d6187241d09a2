"""Graphs, predominated graphs, keyed hypergraphs, and the reductions between them.

Vertices are dense integer ids ``0..n-1``.  A graph may optionally carry
integer *labels* (external names used by fixture files and CLI output);
all algorithms work on ids and never look at labels.
"""

from __future__ import annotations

from array import array
from collections import deque
from functools import cached_property
from itertools import accumulate, chain
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence


class GraphFormatError(ValueError):
    """Malformed graph or hypergraph text.  ``line`` is 1-based (0 = whole input)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.adjacency) != self.n:
            raise ValueError("adjacency length does not match n")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels length does not match n")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[int] | None = None) -> "Graph":
        """Build a simple graph; repeated edges collapse, self-loops are rejected."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs),
                   tuple(labels) if labels is not None else None)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def closed_neighborhood(self, v: int) -> frozenset[int]:
        return frozenset(self.adjacency[v]) | {v}

    def has_edge(self, u: int, v: int) -> bool:
        adj = self.adjacency[u]
        # adjacency lists are short in practice; bisect is not worth it
        return v in adj

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    @cached_property
    def csr(self) -> tuple[array, array]:
        """Compressed adjacency ``(offsets, targets)`` as int32 arrays, built once."""
        offsets = array("i", [0])
        offsets.extend(accumulate(map(len, self.adjacency)))
        targets = array("i", chain.from_iterable(self.adjacency))
        return offsets, targets

    @property
    def edge_count(self) -> int:
        return sum(map(len, self.adjacency)) // 2

    def label(self, v: int) -> int:
        return self.labels[v] if self.labels is not None else v

    def id_of(self, label: int) -> int:
        if self.labels is None:
            if not 0 <= label < self.n:
                raise KeyError(label)
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def induced(self, keep: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on ``keep`` with ids compacted in ascending order."""
        kept = sorted(set(keep))
        old_to_new = {v: i for i, v in enumerate(kept)}
        edges = [(old_to_new[u], old_to_new[v]) for u, v in self.edges()
                 if u in old_to_new and v in old_to_new]
        labels = [self.label(v) for v in kept] if self.labels is not None else None
        return Graph.from_edges(len(kept), edges, labels), old_to_new


@dataclass(frozen=True)
class PredominatedGraph:
    graph: Graph
    predominated: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "predominated", frozenset(self.predominated))
        bad = [v for v in self.predominated if not 0 <= v < self.graph.n]
        if bad:
            raise ValueError(f"predominated ids out of range: {sorted(bad)}")

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def free_mask(self) -> bytes:
        """One byte per vertex: 1 for vertices outside D, built once."""
        mask = bytearray(b"\x01") * self.graph.n
        for v in self.predominated:
            mask[v] = 0
        return bytes(mask)

    @property
    def free(self) -> list[int]:
        """Vertices whose closed neighborhoods are winning sets for Staller."""
        return [v for v in range(self.graph.n) if v not in self.predominated]

    def with_predominated(self, d: Iterable[int]) -> "PredominatedGraph":
        return PredominatedGraph(self.graph, frozenset(d))


def _key_order(key: Hashable):
    if isinstance(key, int):
        return (0, key, "")
    return (1, 0, str(key))


def sorted_keys(keys: Iterable[Hashable]) -> list[Hashable]:
    """Ascending edge-key order: integer keys first, then the rest by string."""
    return sorted(keys, key=_key_order)


@dataclass(frozen=True)
class Hypergraph:
    """Vertex count plus keyed hyperedges.

    Edges are *not* deduplicated: two keys may map to the same vertex set.
    Iteration over :attr:`edges` follows insertion order; algorithms that
    need a canonical order use :func:`sorted_keys`.
    """

    n: int
    edges: Mapping[Hashable, frozenset[int]]

    def __post_init__(self):
        frozen = {}
        for k, e in self.edges.items():
            e = frozenset(e)
            if not e:
                raise ValueError(f"edge {k!r} is empty")
            if min(e) < 0 or max(e) >= self.n:
                raise ValueError(f"edge {k!r} has vertices outside 0..{self.n - 1}")
            frozen[k] = e
        object.__setattr__(self, "edges", frozen)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.n == other.n and dict(self.edges) == dict(other.edges)

    def __hash__(self):
        return hash((self.n, frozenset(self.edges.items())))

    def keys(self) -> list[Hashable]:
        return sorted_keys(self.edges)

    def without(self, key: Hashable) -> "Hypergraph":
        return Hypergraph(self.n, {k: e for k, e in self.edges.items() if k != key})

    def with_edge(self, key: Hashable, e: Iterable[int]) -> "Hypergraph":
        if key in self.edges:
            raise ValueError(f"duplicate edge key {key!r}")
        edges = dict(self.edges)
        edges[key] = frozenset(e)
        return Hypergraph(self.n, edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges.values() if v in e)

    def edge_masks(self) -> list[int]:
        """Edges as integer bitmasks in ascending key order."""
        return [sum(1 << v for v in self.edges[k]) for k in self.keys()]


# --- text formats -----------------------------------------------------------

def _tokens(text: str | bytes):
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GraphFormatError(f"input is not UTF-8: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {tok!r}", lineno) from None


def _parse_header(line: str, lineno: int) -> int:
    if not line.startswith("n="):
        raise GraphFormatError("expected header 'n=<count>'", lineno)
    n = _int(line[2:].strip(), lineno)
    if n < 0:
        raise GraphFormatError("vertex count must be non-negative", lineno)
    return n


def parse_graph(text: str | bytes) -> PredominatedGraph:
    """Parse the line-oriented predominated-graph format.

    ``n=<count>``, then ``e <u> <v>`` lines, an optional ``labels: ...`` line,
    and a final ``D: ...`` line.  ``#`` starts a comment line.
    """
    n = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    labels: list[int] | None = None
    d: list[int] | None = None
    for lineno, line in _tokens(text):
        if n is None:
            n = _parse_header(line, lineno)
            continue
        if d is not None:
            raise GraphFormatError("content after the 'D:' line", lineno)
        if line.startswith("D:"):
            d = [_int(t, lineno) for t in line[2:].split()]
            for v in d:
                if not 0 <= v < n:
                    raise GraphFormatError(f"vertex id {v} out of range", lineno)
            if len(set(d)) != len(d):
                raise GraphFormatError("repeated id in D", lineno)
        elif line.startswith("labels:"):
            if labels is not None:
                raise GraphFormatError("repeated 'labels:' line", lineno)
            labels = [_int(t, lineno) for t in line[7:].split()]
            if len(labels) != n:
                raise GraphFormatError(f"expected {n} labels, got {len(labels)}", lineno)
            if len(set(labels)) != n:
                raise GraphFormatError("labels must be distinct", lineno)
        else:
            parts = line.split()
            if parts[0] != "e" or len(parts) != 3:
                raise GraphFormatError(f"malformed line {line!r}", lineno)
            u, v = _int(parts[1], lineno), _int(parts[2], lineno)
            for w in (u, v):
                if not 0 <= w < n:
                    raise GraphFormatError(f"vertex id {w} out of range", lineno)
            if u == v:
                raise GraphFormatError(f"self-loop at {u}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {u} {v}", lineno)
            seen.add(key)
            edges.append(key)
    if n is None:
        raise GraphFormatError("missing 'n=' header")
    if d is None:
        raise GraphFormatError("missing final 'D:' line")
    return PredominatedGraph(Graph.from_edges(n, edges, labels), frozenset(d))


def render_graph(pg: PredominatedGraph | Graph) -> str:
    """Canonical text form: edges sorted by (min endpoint, max endpoint)."""
    if isinstance(pg, Graph):
        pg = PredominatedGraph(pg)
    g = pg.graph
    lines = [f"n={g.n}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    if g.labels is not None:
        lines.append("labels: " + " ".join(map(str, g.labels)))
    lines.append(" ".join(["D:", *map(str, sorted(pg.predominated))]))
    return "\n".join(lines) + "\n"


def _parse_key(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def parse_hypergraph(text: str | bytes) -> Hypergraph:
    """Parse ``n=<count>`` followed by ``h <key> <v1> <v2> ...`` lines."""
    n = None
    edges: dict = {}
    for lineno, line in _tokens(text):
        if n is None:
            n = _parse_header(line, lineno)
            continue
        parts = line.split()
        if parts[0] != "h" or len(parts) < 3:
            raise GraphFormatError(f"malformed line {line!r}", lineno)
        key = _parse_key(parts[1])
        if key in edges:
            raise GraphFormatError(f"duplicate edge key {parts[1]}", lineno)
        verts = [_int(t, lineno) for t in parts[2:]]
        for v in verts:
            if not 0 <= v < n:
                raise GraphFormatError(f"vertex id {v} out of range", lineno)
        edges[key] = frozenset(verts)
    if n is None:
        raise GraphFormatError("missing 'n=' header")
    return Hypergraph(n, edges)


def render_hypergraph(h: Hypergraph) -> str:
    lines = [f"n={h.n}"]
    for k in h.keys():
        lines.append(" ".join(["h", str(k), *map(str, sorted(h.edges[k]))]))
    return "\n".join(lines) + "\n"


# --- reductions -------------------------------------------------------------

def closed_neighborhood_hypergraph(pg: PredominatedGraph) -> Hypergraph:
    """The game hypergraph of (G, D): one edge N[v], keyed by v, per v not in D."""
    g = pg.graph
    return Hypergraph(g.n, {v: g.closed_neighborhood(v) for v in pg.free})


def atomize_with_map(pg: PredominatedGraph) -> tuple[PredominatedGraph, dict[int, int]]:
    """Drop edges inside D, then drop D-vertices left isolated.

    Returns the reduced graph and the map from surviving old ids to new ids.
    """
    g, d = pg.graph, pg.predominated
    kept_edges = [(u, v) for u, v in g.edges() if not (u in d and v in d)]
    deg = [0] * g.n
    for u, v in kept_edges:
        deg[u] += 1
        deg[v] += 1
    keep = [v for v in range(g.n) if v not in d or deg[v] > 0]
    old_to_new = {v: i for i, v in enumerate(keep)}
    edges = [(old_to_new[u], old_to_new[v]) for u, v in kept_edges]
    labels = [g.label(v) for v in keep] if g.labels is not None else None
    reduced = Graph.from_edges(len(keep), edges, labels)
    return PredominatedGraph(reduced, frozenset(old_to_new[v] for v in d if v in old_to_new)), old_to_new


def atomize(pg: PredominatedGraph) -> PredominatedGraph:
    return atomize_with_map(pg)[0]


# --- structural queries -----------------------------------------------------

def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    adj = g.adjacency
    seen = bytearray(g.n)
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = 1
        comp = [s]
        for u in comp:  # the list doubles as the BFS queue
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = 1
                    comp.append(w)
        comp.sort()
        out.append(comp)
    return out


def _component_count(g: Graph) -> int:
    adj = g.adjacency
    seen = bytearray(g.n)
    count = 0
    for s in range(g.n):
        if seen[s]:
            continue
        count += 1
        seen[s] = 1
        queue = [s]
        for u in queue:
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = 1
                    queue.append(w)
    return count


def is_connected(g: Graph) -> bool:
    return g.n > 0 and _component_count(g) == 1


def is_forest(g: Graph) -> bool:
    return g.edge_count == g.n - _component_count(g)


def is_tree(g: Graph) -> bool:
    return is_connected(g) and g.edge_count == g.n - 1


def bipartition(g: Graph) -> list[int] | None:
    """Side (0/1) per vertex from a BFS 2-coloring, or None if not bipartite."""
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if side[w] < 0:
                    side[w] = side[u] ^ 1
                    queue.append(w)
                elif side[w] == side[u]:
                    return None
    return side


def biconnected_blocks(g: Graph) -> list[list[tuple[int, int]]]:
    """Edge sets of the biconnected blocks (iterative Hopcroft-Tarjan)."""
    disc = [-1] * g.n
    low = [0] * g.n
    blocks: list[list[tuple[int, int]]] = []
    stack: list[tuple[int, int]] = []
    timer = 0
    for root in range(g.n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        work = [(root, -1, iter(g.adjacency[root]))]
        while work:
            u, parent, it = work[-1]
            advanced = False
            for w in it:
                if disc[w] < 0:
                    stack.append((u, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    work.append((w, u, iter(g.adjacency[w])))
                    advanced = True
                    break
                if w != parent and disc[w] < disc[u]:
                    stack.append((u, w))
                    low[u] = min(low[u], disc[w])
            if advanced:
                continue
            work.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[u])
                if low[u] >= disc[parent]:
                    block = []
                    while True:
                        e = stack.pop()
                        block.append(e)
                        if e == (parent, u):
                            break
                    blocks.append(block)
    return blocks


def is_cactus(g: Graph) -> bool:
    """Connected, and every edge lies on at most one cycle.

    Equivalently every biconnected block is a single edge or a simple cycle
    (a block is a cycle exactly when its edge count equals its vertex count).
    """
    if not is_connected(g):
        return False
    for block in biconnected_blocks(g):
        if len(block) == 1:
            continue
        verts = {v for e in block for v in e}
        if len(block) != len(verts):
            return False
    return True


class InputClassError(ValueError):
    """The input graph is outside the class an algorithm accepts (e.g. not a forest)."""


def require_forest(g: Graph) -> None:
    if not is_forest(g):
        raise InputClassError("input graph is not a forest")
