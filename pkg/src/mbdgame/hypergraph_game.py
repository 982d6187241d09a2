"""Exhaustive Maker-Breaker solver, criticality checks, and pairing certificates.

Maker always moves first.  The search itself lives in a kernel module:
the compiled ``mbdgame._kernel`` when it was built, otherwise the
pure-Python ``mbdgame._kernel_py``.  Set ``MBDGAME_PURE_PYTHON=1`` to force
the fallback.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass
from typing import Iterable

from mbdgame import _kernel_py
from mbdgame.graph_core import Hypergraph, PredominatedGraph, closed_neighborhood_hypergraph

try:
    if os.environ.get("MBDGAME_PURE_PYTHON"):
        raise ImportError("pure-Python kernel requested")
    from mbdgame import _kernel as _ext
except ImportError:  # extension not built
    _ext = None

kernel = _ext if _ext is not None else _kernel_py

DEFAULT_LIMIT = 28
DEFAULT_TABLE_BITS = 22
_EXT_MAX_EDGES = 1024


class CapacityError(RuntimeError):
    """Instance exceeds a configured size limit; no verdict was produced."""


class Player(str, enum.Enum):
    MAKER = "Maker"
    BREAKER = "Breaker"


@dataclass(frozen=True)
class GameState:
    maker_claimed: int = 0
    breaker_claimed: int = 0

    def __post_init__(self):
        if self.maker_claimed & self.breaker_claimed:
            raise ValueError("a vertex cannot be claimed by both players")
        diff = _popcount(self.maker_claimed) - _popcount(self.breaker_claimed)
        if diff not in (0, 1):
            raise ValueError("claim counts are inconsistent with Maker moving first")

    @property
    def to_move(self) -> Player:
        if _popcount(self.maker_claimed) == _popcount(self.breaker_claimed):
            return Player.MAKER
        return Player.BREAKER

    @classmethod
    def from_sets(cls, maker: Iterable[int] = (), breaker: Iterable[int] = ()) -> "GameState":
        return cls(_mask(maker), _mask(breaker))

    def claim(self, v: int) -> "GameState":
        bit = 1 << v
        if (self.maker_claimed | self.breaker_claimed) & bit:
            raise ValueError(f"vertex {v} is already claimed")
        if self.to_move is Player.MAKER:
            return GameState(self.maker_claimed | bit, self.breaker_claimed)
        return GameState(self.maker_claimed, self.breaker_claimed | bit)


@dataclass(frozen=True)
class Verdict:
    winner: Player
    first_optimal_move: int | None
    nodes_expanded: int

    def to_dict(self) -> dict:
        return {
            "winner": self.winner.value,
            "first_optimal_move": self.first_optimal_move,
            "nodes_expanded": self.nodes_expanded,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def solve_state(h: Hypergraph, state: GameState = GameState(), *, limit: int = DEFAULT_LIMIT,
                table_bits: int = DEFAULT_TABLE_BITS, impl=None) -> Verdict:
    """Solve the position ``state`` on ``h`` under optimal play.

    ``first_optimal_move`` is the lowest-id winning move for the player to
    move, present only when that player wins and a move is available.
    """
    if limit > kernel.MAX_VERTICES:
        raise ValueError(f"limit cannot exceed {kernel.MAX_VERTICES}")
    if h.n > limit:
        raise CapacityError(f"{h.n} vertices exceeds the solver limit of {limit}")
    if impl is None:
        impl = kernel if len(h.edges) <= _EXT_MAX_EDGES else _kernel_py
    bits = _kernel_py.table_bits_for(h.n, table_bits)
    maker_turn = state.to_move is Player.MAKER
    maker_wins, best, nodes = impl.solve_masks(
        h.n, h.edge_masks(), state.maker_claimed, state.breaker_claimed, maker_turn, bits)
    winner = Player.MAKER if maker_wins else Player.BREAKER
    return Verdict(winner, best if best >= 0 else None, int(nodes))


def solve(h: Hypergraph, *, limit: int = DEFAULT_LIMIT, table_bits: int = DEFAULT_TABLE_BITS,
          impl=None) -> Verdict:
    return solve_state(h, GameState(), limit=limit, table_bits=table_bits, impl=impl)


def maker_wins(h: Hypergraph, **kw) -> bool:
    return solve(h, **kw).winner is Player.MAKER


def is_critical(h: Hypergraph, **kw) -> bool:
    """Maker wins on ``h`` but loses after deleting any single keyed edge."""
    if not maker_wins(h, **kw):
        return False
    return all(not maker_wins(h.without(k), **kw) for k in h.keys())


def extract_critical_subhypergraph(h: Hypergraph, **kw) -> Hypergraph:
    """Greedy edge deletion in ascending key order while Maker still wins."""
    if not maker_wins(h, **kw):
        raise ValueError("Breaker wins on the input; it has no critical subhypergraph")
    cur = h
    for k in h.keys():
        trial = cur.without(k)
        if maker_wins(trial, **kw):
            cur = trial
    return cur


def strip_isolated_with_map(h: Hypergraph) -> tuple[Hypergraph, dict[int, int]]:
    used = sorted(set().union(*h.edges.values())) if h.edges else []
    old_to_new = {v: i for i, v in enumerate(used)}
    edges = {k: frozenset(old_to_new[v] for v in e) for k, e in h.edges.items()}
    return Hypergraph(len(used), edges), old_to_new


def strip_isolated(h: Hypergraph) -> Hypergraph:
    return strip_isolated_with_map(h)[0]


def hypergraph_components(h: Hypergraph) -> list[list[int]]:
    """Vertex components of ``h`` (two vertices are linked when they share an edge)."""
    parent = list(range(h.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in h.edges.values():
        it = iter(e)
        first = find(next(it))
        for v in it:
            r = find(v)
            if r != first:
                parent[r] = first
    groups: dict[int, list[int]] = {}
    for v in range(h.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


# --- pairing certificates ---------------------------------------------------

class InvalidCertificate(ValueError):
    """The pairs overlap or are malformed, so they are not a pairing at all."""


@dataclass(frozen=True)
class PairingCertificate:
    pairs: frozenset[frozenset[int]]

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "PairingCertificate":
        return cls(frozenset(frozenset(p) for p in pairs))

    def check_disjoint(self) -> None:
        seen: set[int] = set()
        for p in self.pairs:
            if len(p) != 2:
                raise InvalidCertificate(f"pair {sorted(p)} does not have two distinct vertices")
            if seen & p:
                raise InvalidCertificate(f"pair {sorted(p)} overlaps another pair")
            seen |= p

    def partner(self) -> dict[int, int]:
        out = {}
        for p in self.pairs:
            a, b = sorted(p)
            out[a], out[b] = b, a
        return out


def validate_pairing(h: Hypergraph, cert: PairingCertificate) -> bool:
    """True when every edge of ``h`` contains some pair in full.

    Then Breaker, answering each Maker move with its partner, wins as second
    player.  Overlapping pairs raise :class:`InvalidCertificate`.
    """
    cert.check_disjoint()
    pairs = list(cert.pairs)
    return all(any(p <= e for p in pairs) for e in h.edges.values())


def pairing_strategy(cert: PairingCertificate):
    """Breaker strategy from a pairing: reply with the partner, else any free vertex."""
    partner = cert.partner()

    def reply(n: int, maker: set[int], breaker: set[int], last: int) -> int:
        u = partner.get(last)
        if u is not None and u not in maker and u not in breaker:
            return u
        for v in range(n):
            if v not in maker and v not in breaker:
                return v
        raise ValueError("no unclaimed vertex left")

    return reply


# --- MBD wrappers -----------------------------------------------------------

def staller_wins_game(pg: PredominatedGraph, **kw) -> Verdict:
    """Solve the domination game on (G, D); Staller plays Maker, Dominator Breaker."""
    return solve(closed_neighborhood_hypergraph(pg), **kw)


def staller_wins(pg: PredominatedGraph, **kw) -> bool:
    return staller_wins_game(pg, **kw).winner is Player.MAKER


def is_mbd_critical(pg: PredominatedGraph, **kw) -> bool:
    return is_critical(closed_neighborhood_hypergraph(pg), **kw)


def is_dominator_critical_game(pg: PredominatedGraph, **kw) -> bool:
    """Brute-force Dominator-criticality: Dominator wins on (G, D), Staller on every D - v."""
    if not pg.predominated:
        raise ValueError("Dominator-criticality requires a nonempty predominated set")
    if staller_wins(pg, **kw):
        return False
    return all(staller_wins(pg.with_predominated(pg.predominated - {v}), **kw)
               for v in sorted(pg.predominated))


def play(h: Hypergraph, maker_strategy, breaker_strategy) -> tuple[Player, list[int]]:
    """Play a full game between two strategy callables; returns winner and transcript.

    Strategies are called as ``f(n, maker_set, breaker_set, last_move)`` and
    return the vertex to claim.  The game stops as soon as it is decided.
    """
    maker: set[int] = set()
    breaker: set[int] = set()
    transcript: list[int] = []
    edges = list(h.edges.values())
    last = -1
    while True:
        if any(e <= maker for e in edges):
            return Player.MAKER, transcript
        if all(e & breaker for e in edges) or len(maker) + len(breaker) == h.n:
            return Player.BREAKER, transcript
        maker_turn = len(maker) == len(breaker)
        strat = maker_strategy if maker_turn else breaker_strategy
        v = strat(h.n, maker, breaker, last)
        if v in maker or v in breaker or not 0 <= v < h.n:
            raise ValueError(f"illegal move {v}")
        (maker if maker_turn else breaker).add(v)
        transcript.append(v)
        last = v


def optimal_strategy(h: Hypergraph, **kw):
    """Strategy backed by the solver: the lowest-id winning move, else the lowest-id free vertex."""

    def move(n: int, maker: set[int], breaker: set[int], last: int) -> int:
        verdict = solve_state(h, GameState.from_sets(maker, breaker), **kw)
        if verdict.first_optimal_move is not None:
            return verdict.first_optimal_move
        return next(v for v in range(n) if v not in maker and v not in breaker)

    return move


__all__ = [
    "CapacityError", "GameState", "InvalidCertificate", "PairingCertificate", "Player",
    "Verdict", "extract_critical_subhypergraph", "hypergraph_components", "is_critical",
    "is_dominator_critical_game", "is_mbd_critical", "kernel", "maker_wins", "optimal_strategy",
    "pairing_strategy", "play", "solve", "solve_state", "staller_wins", "staller_wins_game",
    "strip_isolated", "strip_isolated_with_map", "validate_pairing",
]
