# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled candidate checking and enumeration kernels.

Same signatures and enumeration order as ``_kernels_py``.
"""

from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memset


cdef struct Arena:
    int n
    int C
    int *owner
    int *out_ptr
    int *out_edges
    int *e_tgt
    int *e_col


cdef int *_ints(seq) except NULL:
    cdef Py_ssize_t k = len(seq)
    cdef int *buf = <int *> malloc((k if k > 0 else 1) * sizeof(int))
    cdef Py_ssize_t i
    if buf == NULL:
        raise MemoryError()
    for i in range(k):
        buf[i] = seq[i]
    return buf


cdef void _free_arena(Arena *a):
    free(a.owner)
    free(a.out_ptr)
    free(a.out_edges)
    free(a.e_tgt)
    free(a.e_col)


cdef int _load_arena(Arena *a, int n, owner, out_ptr, out_edges, e_tgt, e_col, int C) except -1:
    a.n = n
    a.C = C
    a.owner = _ints(owner)
    a.out_ptr = _ints(out_ptr)
    a.out_edges = _ints(out_edges)
    a.e_tgt = _ints(e_tgt)
    a.e_col = _ints(e_col)
    return 0


cdef int _check(Arena *a, int *sigma, int Q, int *moves, int *rtab, int R, int r0,
                int *starts, int nstarts, unsigned char *seen, int *stack) nogil:
    # seen: n*Q*R bytes; stack: 3*n*Q*R ints
    cdef int C = a.C
    cdef int top = 0
    cdef int i, v, m, r, e, lo, hi, c, r2, t, m2
    cdef long key
    memset(seen, 0, <size_t> a.n * Q * R)
    for i in range(nstarts):
        v = starts[i]
        key = (<long> v * Q) * R + r0
        if not seen[key]:
            seen[key] = 1
            stack[top] = v
            stack[top + 1] = 0
            stack[top + 2] = r0
            top += 3
    while top > 0:
        top -= 3
        v = stack[top]
        m = stack[top + 1]
        r = stack[top + 2]
        if a.owner[v] == 0:
            lo = -1
            hi = 0
        else:
            lo = a.out_ptr[v]
            hi = a.out_ptr[v + 1]
        i = lo
        while i < hi:
            if lo < 0:
                e = moves[v * Q + m]
            else:
                e = a.out_edges[i]
            c = a.e_col[e]
            r2 = rtab[r * C + c]
            if r2 < 0:
                return 0
            t = a.e_tgt[e]
            m2 = sigma[m * C + c]
            key = (<long> t * Q + m2) * R + r2
            if not seen[key]:
                seen[key] = 1
                stack[top] = t
                stack[top + 1] = m2
                stack[top + 2] = r2
                top += 3
            i += 1
    return 1


def check_candidate(n, owner, out_ptr, out_edges, e_tgt, e_col, C, sigma, Q, moves, rtab, r0, starts):
    """True iff the traces of the candidate from ``starts`` are accepted by ``rtab``."""
    cdef Arena a
    cdef int R = len(rtab) // C if C else 1
    cdef int q = Q
    _load_arena(&a, n, owner, out_ptr, out_edges, e_tgt, e_col, C)
    cdef int *sg = _ints(sigma)
    cdef int *mv = _ints(moves)
    cdef int *rt = _ints(rtab)
    cdef int *st = _ints(starts)
    cdef size_t cells = <size_t> n * q * R
    cdef unsigned char *seen = <unsigned char *> malloc(cells + 1)
    cdef int *stack = <int *> malloc((3 * cells + 3) * sizeof(int))
    cdef int ok
    try:
        if seen == NULL or stack == NULL:
            raise MemoryError()
        ok = _check(&a, sg, q, mv, rt, R, r0, st, len(starts), seen, stack)
    finally:
        free(seen)
        free(stack)
        free(sg)
        free(mv)
        free(rt)
        free(st)
        _free_arena(&a)
    return ok == 1


cdef int _choice_pairs(Arena *a, int *sigma, int Q, int *starts, int nstarts,
                       unsigned char *mark, int *stack, int *pairs) nogil:
    # fills pairs with v*Q+m for reachable Player 0 pairs in (v, m) order; returns count
    cdef int C = a.C
    cdef int top = 0
    cdef int i, v, m, e, t, m2, k
    memset(mark, 0, <size_t> a.n * Q)
    for i in range(nstarts):
        v = starts[i]
        if not mark[v * Q]:
            mark[v * Q] = 1
            stack[top] = v * Q
            top += 1
    while top > 0:
        top -= 1
        v = stack[top] // Q
        m = stack[top] % Q
        for i in range(a.out_ptr[v], a.out_ptr[v + 1]):
            e = a.out_edges[i]
            t = a.e_tgt[e]
            m2 = sigma[m * C + a.e_col[e]]
            if not mark[t * Q + m2]:
                mark[t * Q + m2] = 1
                stack[top] = t * Q + m2
                top += 1
    k = 0
    for v in range(a.n):
        if a.owner[v] == 0:
            for m in range(Q):
                if mark[v * Q + m]:
                    pairs[k] = v * Q + m
                    k += 1
    return k


cdef int _next_table(int *table, int *top, int size, int C, int Q) nogil:
    # advance to the next canonical table in lexicographic order; 0 when exhausted
    cdef int i, j, hi
    while True:
        i = size - 1
        while i >= 0:
            hi = top[i] + 1
            if hi > Q - 1:
                hi = Q - 1
            if table[i] < hi:
                break
            i -= 1
        if i < 0:
            return 0
        table[i] += 1
        top[i + 1] = top[i] if top[i] > table[i] else table[i]
        for j in range(i + 1, size):
            table[j] = 0
            top[j + 1] = top[j]
        if _valid_table(top, size, C, Q):
            return 1


cdef int _valid_table(int *top, int size, int C, int Q) nogil:
    cdef int row
    for row in range(size // C):
        if row > top[row * C]:
            return 0
    return top[size] == Q - 1


def search_level(n, owner, out_ptr, out_edges, e_tgt, e_col, C, Q, rtab, r0, starts,
                 stop_at_first=True, limit=0):
    """Exhaustively check every canonical Q-state chromatic candidate.

    Returns ``(tables, candidates, passing, witness, complete)`` as in the
    pure-Python kernel.
    """
    cdef Arena a
    cdef int q = Q
    cdef int c = C
    cdef int R = len(rtab) // C if C else 1
    cdef int rinit = r0
    cdef int size = q * c
    cdef int nst = len(starts)
    cdef bint stop = stop_at_first
    cdef long cap = limit
    cdef int complete = 1
    cdef long tables = 0, candidates = 0, passing = 0
    cdef int i, k, j, v, m, d, found = 0, more
    _load_arena(&a, n, owner, out_ptr, out_edges, e_tgt, e_col, C)
    cdef int *rt = _ints(rtab)
    cdef int *st = _ints(starts)
    cdef size_t cells = <size_t> n * q * R
    cdef unsigned char *seen = <unsigned char *> malloc(cells + 1)
    cdef int *stack = <int *> malloc((3 * cells + 3) * sizeof(int))
    cdef unsigned char *mark = <unsigned char *> malloc(<size_t> n * q + 1)
    cdef int *pstack = <int *> malloc((n * q + 1) * sizeof(int))
    cdef int *pairs = <int *> malloc((n * q + 1) * sizeof(int))
    cdef int *digits = <int *> calloc(n * q + 1, sizeof(int))
    cdef int *table = <int *> calloc(size + 1, sizeof(int))
    cdef int *top = <int *> calloc(size + 1, sizeof(int))
    cdef int *moves = <int *> malloc((n * q + 1) * sizeof(int))
    cdef int *wsig = <int *> malloc((size + 1) * sizeof(int))
    cdef int *wmov = <int *> malloc((n * q + 1) * sizeof(int))
    try:
        if (seen == NULL or stack == NULL or mark == NULL or pstack == NULL or pairs == NULL
                or digits == NULL or table == NULL or top == NULL or moves == NULL
                or wsig == NULL or wmov == NULL):
            raise MemoryError()
        with nogil:
            more = _valid_table(top, size, c, q)
            if not more:
                more = _next_table(table, top, size, c, q)
            while more:
                tables += 1
                k = _choice_pairs(&a, table, q, st, nst, mark, pstack, pairs)
                for v in range(a.n):
                    if a.owner[v] == 0:
                        for m in range(q):
                            moves[v * q + m] = a.out_edges[a.out_ptr[v]]
                    else:
                        for m in range(q):
                            moves[v * q + m] = -1
                for j in range(k):
                    digits[j] = 0
                while True:
                    for j in range(k):
                        v = pairs[j] // q
                        moves[pairs[j]] = a.out_edges[a.out_ptr[v] + digits[j]]
                    if cap and candidates >= cap:
                        complete = 0
                        break
                    candidates += 1
                    if _check(&a, table, q, moves, rt, R, rinit, st, nst, seen, stack):
                        passing += 1
                        if not found:
                            found = 1
                            for i in range(size):
                                wsig[i] = table[i]
                            for i in range(a.n * q):
                                wmov[i] = moves[i]
                        if stop:
                            break
                    j = k - 1
                    while j >= 0:
                        v = pairs[j] // q
                        digits[j] += 1
                        if digits[j] < a.out_ptr[v + 1] - a.out_ptr[v]:
                            break
                        digits[j] = 0
                        j -= 1
                    if j < 0:
                        break
                if (found and stop) or not complete:
                    break
                more = _next_table(table, top, size, c, q)
        witness = None
        if found:
            witness = ([wsig[i] for i in range(size)], [wmov[i] for i in range(n * q)])
        return tables, candidates, passing, witness, complete == 1
    finally:
        free(seen)
        free(stack)
        free(mark)
        free(pstack)
        free(pairs)
        free(digits)
        free(table)
        free(top)
        free(moves)
        free(wsig)
        free(wmov)
        free(rt)
        free(st)
        _free_arena(&a)
