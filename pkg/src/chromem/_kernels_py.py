"""Pure-Python candidate checking and enumeration kernels.

Mirrors ``_kernels.pyx`` call for call; used when the compiled module is not
available and as the reference in the backend benchmark.

Flat integer encoding shared by both backends:

* ``owner[v]``; ``out_ptr[v]:out_ptr[v+1]`` slices ``out_edges``;
  ``e_tgt[e]``, ``e_col[e]`` per edge.
* ``sigma[m*C + c]`` chromatic transitions; ``moves[v*Q + m]`` an edge id.
* ``rtab[r*C + c]`` the determinized reference traces, -1 for dead.
"""


def check_candidate(n, owner, out_ptr, out_edges, e_tgt, e_col, C, sigma, Q, moves, rtab, r0, starts):
    """True iff the traces of the candidate from ``starts`` are accepted by ``rtab``."""
    R = len(rtab) // C if C else 1
    seen = bytearray(n * Q * R)
    stack = []
    for v in starts:
        key = (v * Q) * R + r0
        if not seen[key]:
            seen[key] = 1
            stack.append((v, 0, r0))
    while stack:
        v, m, r = stack.pop()
        if owner[v] == 0:
            edges = (moves[v * Q + m],)
        else:
            edges = out_edges[out_ptr[v]:out_ptr[v + 1]]
        for e in edges:
            c = e_col[e]
            r2 = rtab[r * C + c]
            if r2 < 0:
                return False
            t = e_tgt[e]
            m2 = sigma[m * C + c]
            key = (t * Q + m2) * R + r2
            if not seen[key]:
                seen[key] = 1
                stack.append((t, m2, r2))
    return True


def reachable_choice_pairs(n, owner, out_ptr, out_edges, e_tgt, e_col, C, sigma, Q, starts):
    """Player 0 pairs (v, m) reachable in arena x memory under all edges, sorted."""
    seen = bytearray(n * Q)
    stack = []
    for v in starts:
        if not seen[v * Q]:
            seen[v * Q] = 1
            stack.append((v, 0))
    while stack:
        v, m = stack.pop()
        for i in range(out_ptr[v], out_ptr[v + 1]):
            e = out_edges[i]
            t = e_tgt[e]
            m2 = sigma[m * C + e_col[e]]
            if not seen[t * Q + m2]:
                seen[t * Q + m2] = 1
                stack.append((t, m2))
    return [(v, m) for v in range(n) if owner[v] == 0 for m in range(Q) if seen[v * Q + m]]


def canonical_tables(Q, C):
    """Chromatic transition tables with state 0 initial, all states reachable and
    numbered in BFS order over colors, in lexicographic row-major order."""
    size = Q * C
    if size == 0:
        return
    table = [0] * size
    # top[i]: highest state id used among entries before position i
    top = [0] * (size + 1)

    def rec(i):
        if i == size:
            if top[size] == Q - 1:
                yield table
            return
        row = i // C
        if i % C == 0 and row > top[i]:
            return
        hi = min(top[i] + 1, Q - 1)
        for val in range(hi + 1):
            table[i] = val
            top[i + 1] = max(top[i], val)
            yield from rec(i + 1)

    yield from rec(0)


def search_level(n, owner, out_ptr, out_edges, e_tgt, e_col, C, Q, rtab, r0, starts,
                 stop_at_first=True, limit=0):
    """Exhaustively check every canonical Q-state chromatic candidate.

    Returns ``(tables, candidates, passing, witness, complete)``.  ``witness``
    is the first passing ``(sigma, moves)`` in enumeration order or None;
    ``complete`` is False when ``limit`` (if non-zero) candidates were checked
    before the level was exhausted.
    """
    tables = candidates = passing = 0
    witness = None
    for sigma in canonical_tables(Q, C):
        tables += 1
        pairs = reachable_choice_pairs(n, owner, out_ptr, out_edges, e_tgt, e_col, C, sigma, Q, starts)
        moves = [-1] * (n * Q)
        for v in range(n):
            if owner[v] == 0:
                for m in range(Q):
                    moves[v * Q + m] = out_edges[out_ptr[v]]
        digits = [0] * len(pairs)
        radix = [out_ptr[v + 1] - out_ptr[v] for v, _ in pairs]
        while True:
            for (v, m), d in zip(pairs, digits):
                moves[v * Q + m] = out_edges[out_ptr[v] + d]
            if limit and candidates >= limit:
                return tables, candidates, passing, witness, False
            candidates += 1
            if check_candidate(n, owner, out_ptr, out_edges, e_tgt, e_col, C, sigma, Q, moves, rtab, r0, starts):
                passing += 1
                if witness is None:
                    witness = (list(sigma), list(moves))
                if stop_at_first:
                    return tables, candidates, passing, witness, True
            j = len(digits) - 1
            while j >= 0:
                digits[j] += 1
                if digits[j] < radix[j]:
                    break
                digits[j] = 0
                j -= 1
            if j < 0:
                break
    return tables, candidates, passing, witness, True
