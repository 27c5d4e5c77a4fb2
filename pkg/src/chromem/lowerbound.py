"""The lower-bound family A(n, q) with its counting strategy and word oracles.

Nodes are ``u, v0, ..., vn, t``.  Player 0 owns only ``t``.  From ``u`` a
z-edge enters every ``vi``; x-edges rotate ``vi -> v(i-1)`` and close the
cycle with ``v0 -> vn``; every ``vi`` has a y-loop; ``v0`` leaves to ``t`` by
z; ``t`` returns to ``v0`` by a c-edge or a d-edge.  The reference strategy
counts y's modulo q, resets on ``v0 -> vn`` and plays c exactly when the
count is 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .arena import Arena, make_arena
from .memory import GENERAL, MemoryStructure, Strategy


def _check_nq(n: int, q: int):
    if n < 1 or q < 1:
        raise ValueError("n and q must be positive integers")


def gen_arena(n: int, q: int) -> Arena:
    _check_nq(n, q)
    vs = [f"v{i}" for i in range(n + 1)]
    nodes = [("u", 1)] + [(v, 1) for v in vs] + [("t", 0)]
    edges = [("u", "z", v) for v in vs]
    edges += [(vs[i], "x", vs[i - 1]) for i in range(1, n + 1)]
    edges.append((vs[0], "x", vs[n]))
    edges += [(v, "y", v) for v in vs]
    edges += [(vs[0], "z", "t"), ("t", "c", vs[0]), ("t", "d", vs[0])]
    return make_arena(nodes, edges)


def gen_s1(n: int, q: int, arena: Arena | None = None) -> Strategy:
    _check_nq(n, q)
    arena = arena or gen_arena(n, q)
    reset = arena.edge(("v0", "x", f"v{n}"))
    table = []
    for count in range(q):
        row = []
        for e, edge in enumerate(arena.edges):
            if edge.color == "y":
                row.append((count + 1) % q)
            elif e == reset:
                row.append(0)
            else:
                row.append(count)
        table.append(row)
    mem = MemoryStructure(arena, GENERAL, [str(i) for i in range(q)], 0, table)
    t = arena.node("t")
    c_edge = arena.edge(("t", "c", "v0"))
    d_edge = arena.edge(("t", "d", "v0"))
    moves = {(t, count): c_edge if count == 0 else d_edge for count in range(q)}
    return Strategy(mem, moves)


@dataclass(frozen=True)
class LowerBoundInstance:
    n: int
    q: int
    arena: Arena
    s1: Strategy

    @classmethod
    def build(cls, n: int, q: int) -> "LowerBoundInstance":
        arena = gen_arena(n, q)
        return cls(n, q, arena, gen_s1(n, q, arena))


def _check_word(w: str):
    bad = set(w) - {"x", "y"}
    if bad:
        raise ValueError(f"word over {{x, y}} expected, found {''.join(sorted(bad))!r}")


def f_value(w: str, n: int, q: int) -> int:
    """y-count modulo q of the part of w after its (n+1)st x from the right."""
    _check_word(w)
    _check_nq(n, q)
    seen = 0
    cut = 0
    for i in range(len(w) - 1, -1, -1):
        if w[i] == "x":
            seen += 1
            if seen == n + 1:
                cut = i + 1
                break
    return w[cut:].count("y") % q


def check_kappa(kappa: Sequence[int], n: int | None = None, q: int | None = None) -> tuple[int, ...]:
    kappa = tuple(int(i) for i in kappa)
    if n is not None and len(kappa) != n:
        raise ValueError(f"kappa must have length {n}")
    if q is not None and any(not 0 <= i < q for i in kappa):
        raise ValueError(f"kappa entries must lie in 0..{q - 1}")
    if any(i < 0 for i in kappa):
        raise ValueError("kappa entries must be non-negative")
    return kappa


def g_word(kappa: Sequence[int]) -> str:
    return "".join("x" + "y" * i for i in check_kappa(kappa))


def distinguishing_word(k1: Sequence[int], k2: Sequence[int], n: int, q: int) -> str:
    """A word w with f(g(k1) w) = 0 and f(g(k2) w) != 0."""
    k1 = check_kappa(k1, n, q)
    k2 = check_kappa(k2, n, q)
    if k1 == k2:
        raise ValueError("kappas must differ")
    k = max(i for i in range(n) if k1[i] != k2[i])
    r = (-sum(k1[k:])) % q
    return "x" * (k + 1) + "y" * r


def kappas(n: int, q: int):
    return product(range(q), repeat=n)


def separation_states(mem: MemoryStructure, n: int, q: int) -> dict[tuple[int, ...], int]:
    """Memory state reached on z g(kappa) for every kappa."""
    if mem.kind != "chromatic":
        raise ValueError("separation is defined for chromatic memory")
    colors = mem.arena.color_index
    missing = {"x", "y", "z"} - set(colors)
    if missing:
        raise ValueError(f"memory lacks colors {sorted(missing)}")
    out = {}
    for kappa in kappas(n, q):
        word = "z" + g_word(kappa)
        out[kappa] = mem.run_colors(mem.initial, (colors[ch] for ch in word))
    return out


def verify_separation(mem: MemoryStructure, n: int, q: int) -> bool:
    """Whether the q**n words z g(kappa) drive ``mem`` to pairwise distinct states."""
    states = separation_states(mem, n, q)
    return len(set(states.values())) == len(states)


def lemma_path(arena: Arena, w: str, n: int) -> list[int]:
    """An edge path from u colored z w z that ends at t (constructive witness)."""
    _check_word(w)
    i = w.count("x") % (n + 1)
    here = arena.node(f"v{i}")
    path = [arena.edge(("u", "z", f"v{i}"))]
    for ch in w + "z":
        for e in arena.out[here]:
            if arena.edges[e].color == ch:
                break
        else:
            raise AssertionError(f"no {ch}-edge at {arena.node_ids[here]}")
        path.append(e)
        here = arena.edge_target[e]
    return path
