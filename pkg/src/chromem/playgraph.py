"""Strategy-restricted play graphs and exact trace inclusion.

A play graph is the product of an arena with the memory of a strategy, where
Player 0 nodes keep only the edge the strategy picks.  Every state has a
successor, and the graph is finitely branching, so the infinite color
sequences of plays are exactly the limits of its finite traces.  Inclusion of
infinite trace sets therefore reduces to inclusion of the prefix-closed
finite trace languages, which a product BFS against the subset construction
of the right-hand side decides.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .arena import Arena
from .memory import Strategy

DEFAULT_MACRO_CAP = 1 << 20
DEFAULT_DEPTH_GUARD = 16


class MacroStateLimitError(RuntimeError):
    pass


class PlayGraph:
    """Reachable part of ``arena x memory`` under ``strategy`` from ``starts``.

    States are ``(node, memory state)`` pairs numbered in BFS discovery
    order.  ``succ[s]`` lists ``(color, s')`` pairs in arena edge order and
    ``by_color[s]`` maps a color to the tuple of its successors.
    """

    def __init__(self, arena: Arena, strategy: Strategy, starts: Sequence[int]):
        self.arena = arena
        self.strategy = strategy
        self.starts = tuple(starts)
        mem = strategy.memory
        index: dict[tuple[int, int], int] = {}
        states: list[tuple[int, int]] = []

        def intern(pair):
            if pair not in index:
                index[pair] = len(states)
                states.append(pair)
            return index[pair]

        self.initial = tuple(dict.fromkeys(intern((v, mem.initial)) for v in self.starts))
        succ: list[tuple] = []
        i = 0
        while i < len(states):
            v, m = states[i]
            if arena.owner[v] == 0:
                edges = (strategy.move(v, m),)
            else:
                edges = arena.out[v]
            succ.append(tuple((arena.edge_color[e], intern((arena.edge_target[e], mem.step(m, e))))
                              for e in edges))
            i += 1
        self.states = tuple(states)
        self.index = index
        self.succ = tuple(succ)
        by_color = []
        for row in self.succ:
            d: dict[int, list[int]] = {}
            for c, t in row:
                lst = d.setdefault(c, [])
                if t not in lst:
                    lst.append(t)
            by_color.append({c: tuple(ts) for c, ts in d.items()})
        self.by_color = tuple(by_color)

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"PlayGraph(states={len(self.states)}, initial={len(self.initial)})"

    def transition_count(self) -> int:
        return sum(len(row) for row in self.succ)

    def colors_of(self, word: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.arena.colors[c] for c in word)


def build_play_graph(arena: Arena, strategy: Strategy, U: Iterable) -> PlayGraph:
    starts = [arena.node(v) for v in U]
    if not starts:
        raise ValueError("start set U must be non-empty")
    return PlayGraph(arena, strategy, starts)


def bounded_traces(g: PlayGraph, depth: int, guard: int = DEFAULT_DEPTH_GUARD,
                   force: bool = False) -> set[tuple[str, ...]]:
    """All colorings (as symbol tuples) of consistent plays of length <= depth."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if depth > guard and not force:
        raise ValueError(f"depth {depth} exceeds the enumeration guard {guard}")
    colors = g.arena.colors
    frontier: dict[tuple, frozenset] = {(): frozenset(g.initial)}
    words: set[tuple[str, ...]] = {()}
    for _ in range(depth):
        nxt: dict[tuple, set] = {}
        for word, states in frontier.items():
            for s in states:
                for c, t in g.succ[s]:
                    nxt.setdefault(word + (colors[c],), set()).add(t)
        frontier = {w: frozenset(ss) for w, ss in nxt.items()}
        words.update(frontier)
    return words


@dataclass(frozen=True)
class InclusionVerdict:
    holds: bool
    counterexample: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        return {"holds": self.holds,
                "counterexample": list(self.counterexample) if self.counterexample is not None else None}

    def word(self) -> str:
        return " ".join(self.counterexample or ())


def _right_color_map(left: PlayGraph, right: PlayGraph) -> list[int]:
    if left.arena.colors == right.arena.colors:
        return list(range(len(left.arena.colors)))
    return [right.arena.color_index.get(c, -1) for c in left.arena.colors]


def trace_inclusion(left: PlayGraph, right: PlayGraph, max_macro: int = DEFAULT_MACRO_CAP) -> InclusionVerdict:
    """Decide whether every trace of ``left`` is a trace of ``right``.

    On failure the counterexample is the shortest finite color word realizable
    on the left but not on the right, lexicographically least among those by
    the left arena's color order.
    """
    cmap = _right_color_map(left, right)
    ncolors = len(left.arena.colors)
    macro_ids: dict[frozenset, int] = {}
    macro_sets: list[frozenset] = []

    def macro(ss):
        key = frozenset(ss)
        mid = macro_ids.get(key)
        if mid is None:
            if len(macro_sets) >= max_macro:
                raise MacroStateLimitError(f"more than {max_macro} macro-states")
            mid = macro_ids[key] = len(macro_sets)
            macro_sets.append(key)
        return mid

    step_cache: dict[tuple[int, int], int] = {}

    def right_step(mid, c):
        key = (mid, c)
        if key not in step_cache:
            rc = cmap[c]
            out: set[int] = set()
            if rc >= 0:
                for r in macro_sets[mid]:
                    out.update(right.by_color[r].get(rc, ()))
            step_cache[key] = macro(out) if out else -1
        return step_cache[key]

    r0 = macro(right.initial)
    parent: dict[tuple[int, int], tuple | None] = {}
    queue: deque = deque()
    for l in left.initial:
        pair = (l, r0)
        if pair not in parent:
            parent[pair] = None
            queue.append(pair)

    def word_of(pair):
        out = []
        while parent[pair] is not None:
            pair, c = parent[pair]
            out.append(c)
        return out[::-1]

    while queue:
        pair = queue.popleft()
        l, mid = pair
        row = left.by_color[l]
        for c in range(ncolors):
            targets = row.get(c)
            if not targets:
                continue
            nmid = right_step(mid, c)
            if nmid < 0:
                return InclusionVerdict(False, left.colors_of(word_of(pair) + [c]))
            for t in targets:
                child = (t, nmid)
                if child not in parent:
                    parent[child] = (pair, c)
                    queue.append(child)
    return InclusionVerdict(True, None)


@dataclass(frozen=True)
class ColorDFA:
    """Determinized trace automaton: ``table[r][c]`` is the successor or -1 (dead)."""

    colors: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    initial: int = 0

    def __len__(self):
        return len(self.table)

    def flat(self) -> list[int]:
        return [x for row in self.table for x in row]

    def accepts(self, word: Sequence[str]) -> bool:
        idx = {c: i for i, c in enumerate(self.colors)}
        r = self.initial
        for sym in word:
            c = idx.get(sym)
            if c is None:
                return False
            r = self.table[r][c]
            if r < 0:
                return False
        return True


def determinize(g: PlayGraph, colors: Sequence[str] | None = None,
                max_macro: int = DEFAULT_MACRO_CAP) -> ColorDFA:
    """Subset construction of the finite-trace language of ``g`` over ``colors``."""
    colors = tuple(colors) if colors is not None else g.arena.colors
    cidx = [g.arena.color_index.get(c, -1) for c in colors]
    ids: dict[frozenset, int] = {}
    sets: list[frozenset] = []
    start = frozenset(g.initial)
    ids[start] = 0
    sets.append(start)
    table = []
    i = 0
    while i < len(sets):
        row = []
        for c in cidx:
            out: set[int] = set()
            if c >= 0:
                for s in sets[i]:
                    out.update(g.by_color[s].get(c, ()))
            if not out:
                row.append(-1)
                continue
            key = frozenset(out)
            if key not in ids:
                if len(sets) >= max_macro:
                    raise MacroStateLimitError(f"more than {max_macro} macro-states")
                ids[key] = len(sets)
                sets.append(key)
            row.append(ids[key])
        table.append(tuple(row))
        i += 1
    return ColorDFA(colors, tuple(table), 0)


def play_graph_dot(g: PlayGraph, name: str = "play") -> str:
    """Graphviz description of a play graph; initial states are drawn doubled."""
    from .arena import _dot_quote

    arena = g.arena
    states = g.strategy.memory.states
    label = [f"{arena.node_ids[v]}/{states[m]}" for v, m in g.states]
    init = set(g.initial)
    lines = [f"digraph {_dot_quote(name)} {{"]
    for s, (v, _) in enumerate(g.states):
        shape = "box" if arena.owner[v] == 0 else "ellipse"
        extra = ", peripheries=2" if s in init else ""
        lines.append(f"  s{s} [label={_dot_quote(label[s])}, shape={shape}{extra}];")
    for s, row in enumerate(g.succ):
        for c, t in row:
            lines.append(f"  s{s} -> s{t} [label={_dot_quote(arena.colors[c])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
