# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Maker-Breaker search kernel.

Mirror of ``_kernel_py``: same ordering, same direct-mapped table, same
node accounting.  Positions are pairs of 32-bit claim masks.
"""

from libc.stdint cimport uint64_t, uint32_t, uint8_t
from libc.stdlib cimport calloc, free as cfree, malloc

cdef enum:
    MAXV = 32
    MAXE = 1024

MAX_VERTICES = MAXV
IMPLEMENTATION = "cython"


cdef extern from *:
    int __builtin_ctz(unsigned int) nogil


cdef struct Ctx:
    int n
    int m
    uint32_t full
    uint32_t *masks
    uint64_t *keys
    uint8_t *vals
    int shift
    uint64_t nodes


cdef bint run(Ctx *c, uint32_t maker, uint32_t breaker, bint maker_turn) nogil:
    cdef uint64_t key, slot
    cdef int i, j, k, v, n_live, n_single, n_moves
    cdef uint32_t e, miss, singles, free_, x, low
    cdef int result = -1
    cdef int counts[MAXV]
    cdef int moves[MAXV]
    cdef int live_idx[MAXE]

    c.nodes += 1
    key = (<uint64_t>maker << 32) | breaker
    slot = (key * <uint64_t>0x9E3779B97F4A7C15ULL) >> c.shift
    if c.keys[slot] == key + 1:
        return c.vals[slot]

    n_live = 0
    singles = 0
    n_single = 0
    for i in range(c.m):
        e = c.masks[i]
        if e & breaker:
            continue
        live_idx[n_live] = i
        n_live += 1
        if result >= 0:
            continue
        miss = e & ~maker
        if miss == 0:
            result = 1
        elif miss & (miss - 1) == 0:
            if not (singles & miss):
                n_single += 1
            singles |= miss

    if n_live == 0:
        result = 0
    elif result < 0:
        if maker_turn:
            if singles:
                result = 1
        elif n_single >= 2:
            result = 1
        elif singles:
            result = run(c, maker, breaker | singles, 1)

    if result < 0:
        free_ = c.full & ~(maker | breaker)
        for v in range(c.n):
            counts[v] = 0
        for i in range(n_live):
            x = c.masks[live_idx[i]] & free_
            while x:
                v = __builtin_ctz(x)
                counts[v] += 1
                x &= x - 1
        n_moves = 0
        for v in range(c.n):
            if counts[v] > 0:
                # insertion sort: descending count, ascending id
                j = n_moves
                while j > 0 and counts[moves[j - 1]] < counts[v]:
                    moves[j] = moves[j - 1]
                    j -= 1
                moves[j] = v
                n_moves += 1
        if maker_turn:
            result = 0
            for k in range(n_moves):
                if run(c, maker | (<uint32_t>1 << moves[k]), breaker, 0):
                    result = 1
                    break
        else:
            result = 1
            for k in range(n_moves):
                if not run(c, maker, breaker | (<uint32_t>1 << moves[k]), 1):
                    result = 0
                    break

    c.keys[slot] = key + 1
    c.vals[slot] = <uint8_t>result
    return result


def solve_masks(int n, masks, unsigned long long maker, unsigned long long breaker,
                bint maker_turn, int table_bits):
    """Return ``(maker_wins, best_move, nodes)``; see ``_kernel_py.solve_masks``."""
    cdef Ctx c
    cdef int i, v, m
    cdef bint ok, maker_wins
    cdef int best = -1
    cdef uint32_t mk = <uint32_t>maker, bk = <uint32_t>breaker, free_
    if n > MAXV:
        raise ValueError(f"kernel supports at most {MAXV} vertices")
    masks = list(masks)
    m = len(masks)
    if m > MAXE:
        raise ValueError(f"kernel supports at most {MAXE} edges")
    c.n = n
    c.m = m
    c.full = <uint32_t>((<uint64_t>1 << n) - 1)
    c.shift = 64 - table_bits
    c.nodes = 0
    c.masks = <uint32_t *>malloc(max(m, 1) * sizeof(uint32_t))
    c.keys = <uint64_t *>calloc(<size_t>1 << table_bits, sizeof(uint64_t))
    c.vals = <uint8_t *>calloc(<size_t>1 << table_bits, sizeof(uint8_t))
    if c.masks == NULL or c.keys == NULL or c.vals == NULL:
        cfree(c.masks); cfree(c.keys); cfree(c.vals)
        raise MemoryError()
    try:
        for i in range(m):
            c.masks[i] = <uint32_t>masks[i]
        with nogil:
            maker_wins = run(&c, mk, bk, maker_turn)
            if maker_wins == maker_turn:
                free_ = c.full & ~(mk | bk)
                for v in range(n):
                    if not (free_ >> v) & 1:
                        continue
                    if maker_turn:
                        ok = run(&c, mk | (<uint32_t>1 << v), bk, 0)
                    else:
                        ok = not run(&c, mk, bk | (<uint32_t>1 << v), 1)
                    if ok:
                        best = v
                        break
        return bool(maker_wins), best, c.nodes
    finally:
        cfree(c.masks)
        cfree(c.keys)
        cfree(c.vals)


# --- linear-time criticality test for predominated forests --------------------
# Return codes: 0 ok, 1 not a forest, 2 X empty, 3 T' disconnected,
# 4 X not a bipartition class of T', 5 a non-X vertex of T' has degree != 2.
#
# No traversal: the adjacency is read in CSR order and only per-vertex
# flags (and the union-find parents) are accessed at random.  A forest is
# detected by union-find; T' is a sub-forest, so it is connected iff it has
# one edge fewer than vertices; the class and degree conditions are local.

cdef enum:
    IN_X = 1
    IN_TP = 2
    AHEAD = 8  # prefetch distance along the CSR target array


cdef extern from *:
    void __builtin_prefetch(const void *) nogil


cdef inline int find(int *parent, int x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def recognize_tree(int n, const int[:] offsets, const int[:] targets, const unsigned char[:] in_x):
    """CSR version of ``tree_structures.check_critical_tree``; returns a status code."""
    cdef int i, u, w, ru, rw, deg, m
    cdef long tp_size = 0, tp_edges = 0
    cdef bint any_x = False, split = False, bad_degree = False
    cdef int code = 0
    cdef int *parent
    cdef unsigned char *state
    if n == 0:
        return 2
    if offsets.shape[0] != n + 1 or in_x.shape[0] != n:
        raise ValueError("array lengths do not match n")
    parent = <int *>malloc(n * sizeof(int))
    state = <unsigned char *>malloc(n)
    if parent == NULL or state == NULL:
        cfree(parent); cfree(state)
        raise MemoryError()
    with nogil:
        for u in range(n):
            parent[u] = u
            state[u] = 0  # union-by-rank scratch, reset below
        m = offsets[n]
        for u in range(n):
            for i in range(offsets[u], offsets[u + 1]):
                if i + AHEAD < m:
                    __builtin_prefetch(&parent[targets[i + AHEAD]])
                w = targets[i]
                if w > u:
                    ru = find(parent, u)
                    rw = find(parent, w)
                    if ru == rw:
                        code = 1
                        break
                    if state[ru] < state[rw]:
                        parent[ru] = rw
                    elif state[ru] > state[rw]:
                        parent[rw] = ru
                    else:
                        parent[rw] = ru
                        state[ru] += 1
            if code:
                break
        if code == 0:
            for u in range(n):
                state[u] = IN_X if in_x[u] else 0
            for u in range(n):
                if state[u] & IN_X:
                    any_x = True
                    state[u] |= IN_TP
                    for i in range(offsets[u], offsets[u + 1]):
                        if i + AHEAD < m:
                            __builtin_prefetch(&state[targets[i + AHEAD]])
                        state[targets[i]] |= IN_TP
            if not any_x:
                code = 2
        if code == 0:
            for u in range(n):
                if not (state[u] & IN_TP):
                    continue
                tp_size += 1
                deg = 0
                for i in range(offsets[u], offsets[u + 1]):
                    if i + AHEAD < m:
                        __builtin_prefetch(&state[targets[i + AHEAD]])
                    w = targets[i]
                    if state[w] & IN_TP:
                        deg += 1
                        if w > u:
                            tp_edges += 1
                        if (state[w] & IN_X) == (state[u] & IN_X):
                            split = True
                if not (state[u] & IN_X) and deg != 2:
                    bad_degree = True
            if tp_edges != tp_size - 1:
                code = 3
            elif split:
                code = 4
            elif bad_degree:
                code = 5
    cfree(parent)
    cfree(state)
    return code
