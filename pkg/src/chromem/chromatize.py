"""Turning a general-memory strategy into a chromatic one.

The chromatic strategy's memory state is a knowledge map over the nodes.  In
winning mode it maps each node to a memory state of the original strategy
(or ``None``), recording that some play of the original, colored like the
current play, reaches that node in that state.  In preference mode each entry
also remembers the node such a play started from.

Only knowledge states reachable from the initial one are materialized.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .arena import Arena, Edge, FormatError, _require, load_json
from .memory import CHROMATIC, MemoryStructure, Strategy

BOTTOM = None


def nominal_bounds(n: int, q: int) -> tuple[int, int]:
    """State bounds ``((q+1)**n, (q*n+1)**n)`` of the winning and preference transforms."""
    if n < 1 or q < 1:
        raise ValueError("n and q must be positive")
    return (q + 1) ** n, (q * n + 1) ** n


@dataclass(frozen=True)
class NodePreorder:
    """A total preorder on nodes given as ascending equivalence classes."""

    classes: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        seen = set()
        for cls in self.classes:
            for v in cls:
                if v in seen:
                    raise ValueError(f"node {v!r} appears in two preorder classes")
                seen.add(v)

    def ranks(self, arena: Arena) -> list[int]:
        """Class index of every node, in node order; rejects partial or foreign classes."""
        rank: dict[str, int] = {}
        for i, cls in enumerate(self.classes):
            for v in cls:
                if v not in arena.node_index:
                    raise ValueError(f"preorder mentions unknown node {v!r}")
                rank[v] = i
        missing = [v for v in arena.node_ids if v not in rank]
        if missing:
            raise ValueError(f"preorder does not cover nodes: {', '.join(missing)}")
        return [rank[v] for v in arena.node_ids]

    def leq(self, a: str, b: str) -> bool:
        ra = rb = None
        for i, cls in enumerate(self.classes):
            if a in cls:
                ra = i
            if b in cls:
                rb = i
        if ra is None or rb is None:
            raise KeyError("node not covered by the preorder")
        return ra <= rb

    def upper_set(self, v: str) -> list[str]:
        """Nodes ``u`` with ``v <= u``, in class order."""
        for i, cls in enumerate(self.classes):
            if v in cls:
                return [u for c in self.classes[i:] for u in c]
        raise KeyError(f"node {v!r} not covered by the preorder")

    def to_dict(self) -> dict:
        return {"classes": [list(c) for c in self.classes]}


def parse_preorder(text: str) -> NodePreorder:
    obj = load_json(text, "preorder")
    classes = _require(obj, "classes", list, "preorder")
    out = []
    for i, cls in enumerate(classes):
        if not isinstance(cls, list) or not all(isinstance(v, str) for v in cls):
            raise FormatError(f"preorder: classes[{i}] must be an array of node ids")
        out.append(tuple(cls))
    return NodePreorder(tuple(out))


def _good(arena: Arena, s1: Strategy, state_of, v: int, c: int) -> list[int]:
    # state_of(w) is the S1 memory state known at w, or None
    found = []
    for e in arena.in_edges(v):
        if arena.edge_color[e] != c:
            continue
        w = arena.edge_source[e]
        m = state_of(w)
        if m is None:
            continue
        if arena.owner[w] == 0 and s1.move(w, m) != e:
            continue
        found.append(e)
    return found


def good_edges(f: Sequence, v, c, arena: Arena, s1: Strategy) -> list[Edge]:
    """Edges into ``v`` colored ``c`` from a node with known state that S1 would take.

    ``f`` is a knowledge vector indexed by node order whose entries are S1
    memory states (index or id) or ``None``.
    """
    mem = s1.memory
    vec = [None if x is None else mem.state(x) for x in f]
    return [arena.edges[e] for e in _good(arena, s1, vec.__getitem__, arena.node(v), arena.color(c))]


def _first_move(arena: Arena, s1: Strategy, v: int, m) -> int:
    return s1.move(v, m) if m is not None else arena.out[v][0]


def _build(arena: Arena, s1: Strategy, start, step, known_state):
    """BFS over knowledge states; returns the chromatic strategy."""
    ncolors = len(arena.colors)
    index = {start: 0}
    order = [start]
    table = []
    queue = deque([start])
    while queue:
        f = queue.popleft()
        row = []
        for c in range(ncolors):
            g = step(f, c)
            if g not in index:
                index[g] = len(order)
                order.append(g)
                queue.append(g)
            row.append(index[g])
        table.append(row)
    names = [f"k{i}" for i in range(len(order))]
    mem = MemoryStructure(arena, CHROMATIC, names, 0, table, annotations=order)
    moves = {}
    for v in arena.nodes_of(0):
        for k, f in enumerate(order):
            moves[v, k] = _first_move(arena, s1, v, known_state(f, v))
    return Strategy(mem, moves)


def winning_step(arena: Arena, s1: Strategy, f: tuple, c: int) -> tuple:
    mem = s1.memory
    out = []
    for v in range(arena.n):
        good = _good(arena, s1, f.__getitem__, v, c)
        if not good:
            out.append(BOTTOM)
        else:
            e = good[0]
            out.append(mem.step(f[arena.edge_source[e]], e))
    return tuple(out)


def chromatize_winning(arena: Arena, s1: Strategy, U: Iterable) -> Strategy:
    """Chromatic strategy whose plays from U are all colored like plays of ``s1`` from U.

    Memory annotations hold the knowledge vectors (S1 state index or ``None``
    per node); state ``k0`` is the initial knowledge.
    """
    starts = {arena.node(v) for v in U}
    if not starts:
        raise ValueError("start set U must be non-empty")
    m0 = s1.memory.initial
    f_init = tuple(m0 if v in starts else BOTTOM for v in range(arena.n))
    return _build(arena, s1, f_init,
                  lambda f, c: winning_step(arena, s1, f, c),
                  lambda f, v: f[v])


def preference_step(arena: Arena, s1: Strategy, rank: Sequence[int], f: tuple, c: int) -> tuple:
    mem = s1.memory
    second = [None if x is None else x[1] for x in f]
    out = []
    for v in range(arena.n):
        good = _good(arena, s1, second.__getitem__, v, c)
        if not good:
            out.append(BOTTOM)
            continue
        # highest class of the origin, then smallest source index, then edge index
        e = min(good, key=lambda e: (-rank[f[arena.edge_source[e]][0]], arena.edge_source[e], e))
        origin, m = f[arena.edge_source[e]]
        out.append((origin, mem.step(m, e)))
    return tuple(out)


def chromatize_preference(arena: Arena, s1: Strategy, pre: NodePreorder) -> Strategy:
    """Chromatic strategy with ``col(S2, v)`` inside the union of ``col(s1, u)`` over ``v <= u``.

    Memory annotations hold vectors of ``(origin node, S1 state)`` pairs or ``None``.
    """
    rank = pre.ranks(arena)
    m0 = s1.memory.initial
    f_init = tuple((v, m0) for v in range(arena.n))
    return _build(arena, s1, f_init,
                  lambda f, c: preference_step(arena, s1, rank, f, c),
                  lambda f, v: None if f[v] is None else f[v][1])


def reachable_state_count(strategy: Strategy) -> int:
    """Number of memory states reachable from the initial one."""
    mem = strategy.memory
    seen = {mem.initial}
    stack = [mem.initial]
    while stack:
        m = stack.pop()
        for nxt in mem.table[m]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen)

