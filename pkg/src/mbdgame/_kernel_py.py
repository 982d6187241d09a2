"""Pure-Python Maker-Breaker search kernel (fallback for the compiled ``_kernel``).

Both kernels implement the same search with the same move ordering and the
same direct-mapped transposition table, so verdicts *and* node counts agree.
"""

from __future__ import annotations


MAX_VERTICES = 32
_HASH_MUL = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1

IMPLEMENTATION = "python"


def table_bits_for(n: int, max_bits: int) -> int:
    """Slot-count exponent ``n + 2``, clamped to ``[8, max_bits]``.

    Searches on the instances we care about expand far fewer than ``3^n``
    positions; a table sized to the reachable count beats one sized to the
    state space because the compiled kernel has to zero it up front.
    """
    want = n + 2
    return max(8, min(max_bits, want))


def _popcount(x: int) -> int:
    return bin(x).count("1")


class _Search:
    __slots__ = ("masks", "full", "n", "nodes", "table", "shift")

    def __init__(self, n: int, masks, table_bits: int):
        self.n = n
        self.masks = list(masks)
        self.full = (1 << n) - 1
        self.nodes = 0
        # slot -> (key, maker_wins); a dict so unused slots cost nothing
        self.table: dict[int, tuple[int, bool]] = {}
        self.shift = 64 - table_bits

    def ordered_moves(self, live, free):
        counts = {}
        for e in live:
            x = e & free
            while x:
                low = x & -x
                v = low.bit_length() - 1
                counts[v] = counts.get(v, 0) + 1
                x ^= low
        return sorted(counts, key=lambda v: (-counts[v], v))

    def run(self, maker: int, breaker: int, maker_turn: bool) -> bool:
        self.nodes += 1
        key = (maker << 32) | breaker
        slot = ((key * _HASH_MUL) & _MASK64) >> self.shift
        hit = self.table.get(slot)
        if hit is not None and hit[0] == key:
            return hit[1]

        live = [e for e in self.masks if not e & breaker]
        result = None
        if not live:
            result = False
        else:
            singles = 0
            n_single = 0
            for e in live:
                miss = e & ~maker
                if miss == 0:
                    result = True
                    break
                if miss & (miss - 1) == 0:
                    if not singles & miss:
                        n_single += 1
                    singles |= miss
            if result is None:
                if maker_turn:
                    if singles:
                        result = True
                elif n_single >= 2:
                    result = True
                elif singles:
                    result = self.run(maker, breaker | singles, True)
            if result is None:
                free = self.full & ~(maker | breaker)
                moves = self.ordered_moves(live, free)
                if maker_turn:
                    result = False
                    for v in moves:
                        if self.run(maker | (1 << v), breaker, False):
                            result = True
                            break
                else:
                    result = True
                    for v in moves:
                        if not self.run(maker, breaker | (1 << v), True):
                            result = False
                            break
        self.table[slot] = (key, result)
        return result


def solve_masks(n: int, masks, maker: int, breaker: int, maker_turn: bool,
                table_bits: int) -> tuple[bool, int, int]:
    """Return ``(maker_wins, best_move, nodes)`` for the given position.

    ``best_move`` is the lowest-id unclaimed vertex that wins for the player
    to move, or -1 when that player loses (or nothing is left to claim).
    """
    if n > MAX_VERTICES:
        raise ValueError(f"kernel supports at most {MAX_VERTICES} vertices")
    s = _Search(n, masks, table_bits)
    maker_wins = s.run(maker, breaker, maker_turn)
    best = -1
    if maker_wins == maker_turn:
        free = s.full & ~(maker | breaker)
        for v in range(n):
            if not free >> v & 1:
                continue
            if maker_turn:
                ok = s.run(maker | (1 << v), breaker, False)
            else:
                ok = not s.run(maker, breaker | (1 << v), True)
            if ok:
                best = v
                break
    return maker_wins, best, s.nodes
