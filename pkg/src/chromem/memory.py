"""Memory structures and finite-memory strategies of Player 0.

A general memory structure reads arena edges; a chromatic one reads only the
colors of those edges.  Both are stored as dense tables indexed by state and
by edge (resp. color) index of the arena they were declared against.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .arena import Arena, Edge, FormatError, Path, _require, dump_json, load_json

GENERAL = "general"
CHROMATIC = "chromatic"


class StrategyError(ValueError):
    pass


class MissingMoveError(StrategyError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else "missing next-move entry"


class MemoryStructure:
    """``<M, m_init, delta>`` over an arena.

    ``table[m][x]`` is the successor of state ``m`` on edge ``x`` (general
    kind) or on color ``x`` (chromatic kind).  ``annotations`` optionally
    carries one payload per state, e.g. the knowledge state a chromatized
    strategy was built from.
    """

    def __init__(self, arena: Arena, kind: str, states: Sequence[str], initial: int,
                 table: Sequence[Sequence[int]], annotations: Sequence | None = None):
        if kind not in (GENERAL, CHROMATIC):
            raise StrategyError(f"unknown memory kind: {kind!r}")
        self.arena = arena
        self.kind = kind
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states):
            raise StrategyError("duplicate memory state id")
        self.state_index = {s: i for i, s in enumerate(self.states)}
        if not 0 <= initial < len(self.states):
            raise StrategyError("initial state not among states")
        self.initial = initial
        width = len(arena.edges) if kind == GENERAL else len(arena.colors)
        rows = []
        for m, row in enumerate(table):
            row = tuple(row)
            if len(row) != width or any(not 0 <= x < len(self.states) for x in row):
                raise StrategyError(f"transition row for state {self.states[m]} is not total")
            rows.append(row)
        if len(rows) != len(self.states):
            raise StrategyError("transition table does not cover every state")
        self.table = tuple(rows)
        self.annotations = tuple(annotations) if annotations is not None else None

    @property
    def size(self) -> int:
        return len(self.states)

    def __repr__(self):
        return f"MemoryStructure({self.kind}, states={len(self.states)})"

    def state(self, m) -> int:
        if isinstance(m, int):
            if not 0 <= m < len(self.states):
                raise KeyError(f"unknown memory state index: {m}")
            return m
        try:
            return self.state_index[m]
        except KeyError:
            raise KeyError(f"unknown memory state: {m}") from None

    def step(self, m: int, e: int) -> int:
        if self.kind == GENERAL:
            return self.table[m][e]
        return self.table[m][self.arena.edge_color[e]]

    def step_color(self, m: int, c: int) -> int:
        if self.kind != CHROMATIC:
            raise StrategyError("color steps are only defined for chromatic memory")
        return self.table[m][c]

    def run(self, m: int, edges: Iterable[int]) -> int:
        for e in edges:
            m = self.step(m, e)
        return m

    def run_colors(self, m: int, colors: Iterable[int]) -> int:
        for c in colors:
            m = self.step_color(m, c)
        return m


class Strategy:
    """A memory structure plus the next-move table ``(node, state) -> edge``.

    Entries may be missing for pairs that are never reached; looking one up
    raises :class:`MissingMoveError`.
    """

    def __init__(self, memory: MemoryStructure, moves: Mapping[tuple[int, int], int]):
        self.memory = memory
        self.arena = memory.arena
        arena = self.arena
        self.moves = dict(moves)
        for (v, m), e in self.moves.items():
            if arena.owner[v] != 0:
                raise StrategyError(f"move given for Player 1 node {arena.node_ids[v]}")
            if arena.edge_source[e] != v:
                raise StrategyError(f"move {arena.edges[e]} does not leave {arena.node_ids[v]}")
            if not 0 <= m < memory.size:
                raise StrategyError(f"move given for unknown state index {m}")

    @property
    def q(self) -> int:
        return self.memory.size

    def __repr__(self):
        return f"Strategy({self.memory!r}, moves={len(self.moves)})"

    def move(self, v: int, m: int) -> int:
        try:
            return self.moves[v, m]
        except KeyError:
            raise MissingMoveError(
                f"no next move at node {self.arena.node_ids[v]} in state {self.memory.states[m]}"
            ) from None

    def to_dict(self) -> dict:
        return strategy_to_dict(self)


def run_memory(mem: MemoryStructure, m, s: Sequence) -> str:
    """State reached from ``m`` after reading the edge sequence ``s``."""
    arena = mem.arena
    cur = mem.state(m)
    for e in s:
        cur = mem.step(cur, arena.edge(e))
    return mem.states[cur]


def is_chromatic(mem: MemoryStructure, arena: Arena | None = None) -> bool:
    """Whether the transition function factors through edge colors."""
    if mem.kind == CHROMATIC:
        return True
    arena = arena or mem.arena
    for row in mem.table:
        seen: dict[int, int] = {}
        for e, nxt in enumerate(row):
            c = arena.edge_color[e]
            if seen.setdefault(c, nxt) != nxt:
                return False
    return True


def to_chromatic(mem: MemoryStructure) -> MemoryStructure:
    """Re-express a general structure that factors through colors as chromatic kind."""
    if mem.kind == CHROMATIC:
        return mem
    if not is_chromatic(mem):
        raise StrategyError("memory structure distinguishes edges of the same color")
    arena = mem.arena
    table = []
    for row in mem.table:
        by_color = [0] * len(arena.colors)
        for e, nxt in enumerate(row):
            by_color[arena.edge_color[e]] = nxt
        table.append(by_color)
    return MemoryStructure(arena, CHROMATIC, mem.states, mem.initial, table)


def strategy_move(strategy: Strategy, v, m) -> Edge:
    arena = strategy.arena
    vi = arena.node(v)
    if arena.owner[vi] != 0:
        raise StrategyError(f"{arena.node_ids[vi]} is not a Player 0 node")
    return arena.edges[strategy.move(vi, strategy.memory.state(m))]


def consistent(strategy: Strategy, p: Path) -> bool:
    """Whether every Player 0 decision along ``p`` agrees with ``strategy``."""
    arena = strategy.arena
    mem = strategy.memory
    m = mem.initial
    here = p.start
    for e in p.edges:
        if arena.owner[here] == 0 and strategy.move(here, m) != e:
            return False
        m = mem.step(m, e)
        here = arena.edge_target[e]
    return True


def memoryless(arena: Arena, choice: Mapping | None = None) -> Strategy:
    """One-state strategy; ``choice`` maps Player 0 nodes to edges (default: first out-edge)."""
    choice = choice or {}
    width = len(arena.colors)
    mem = MemoryStructure(arena, CHROMATIC, ["m0"], 0, [[0] * width])
    moves = {}
    for v in arena.nodes_of(0):
        pick = choice.get(arena.node_ids[v], choice.get(v))
        moves[v, 0] = arena.edge(pick) if pick is not None else arena.out[v][0]
    return Strategy(mem, moves)


# -- JSON strategy files -----------------------------------------------------

def _edge_from(obj, arena: Arena, where: str) -> int:
    e = Edge(_require(obj, "source", str, where), _require(obj, "color", str, where),
             _require(obj, "target", str, where))
    try:
        return arena.edge(e)
    except KeyError:
        raise StrategyError(f"{where}: edge {e} is not in the arena") from None


def _edge_dict(edge: Edge) -> dict:
    return {"source": edge.source, "color": edge.color, "target": edge.target}


def strategy_from_dict(obj, arena: Arena) -> Strategy:
    mem_obj = _require(obj, "memory", dict, "strategy")
    kind = _require(mem_obj, "kind", str, "memory")
    if kind not in (GENERAL, CHROMATIC):
        raise FormatError(f"memory: unknown kind {kind!r}")
    states = _require(mem_obj, "states", list, "memory")
    if not states or not all(isinstance(s, str) for s in states):
        raise FormatError("memory: states must be a non-empty array of strings")
    index = {s: i for i, s in enumerate(states)}
    if len(index) != len(states):
        raise StrategyError("memory: duplicate state id")
    initial = _require(mem_obj, "initial", str, "memory")
    if initial not in index:
        raise StrategyError(f"memory: initial state {initial!r} not declared")

    width = len(arena.edges) if kind == GENERAL else len(arena.colors)
    table: list[list] = [[None] * width for _ in states]
    for i, rec in enumerate(_require(mem_obj, "transitions", list, "memory")):
        where = f"transitions[{i}]"
        src = _require(rec, "from", str, where)
        dst = _require(rec, "to", str, where)
        if src not in index or dst not in index:
            raise StrategyError(f"{where}: unknown state")
        if kind == GENERAL:
            x = _edge_from(_require(rec, "edge", dict, where), arena, where + ".edge")
        else:
            c = _require(rec, "color", str, where)
            if c not in arena.color_index:
                raise StrategyError(f"{where}: color {c!r} does not occur in the arena")
            x = arena.color_index[c]
        prev = table[index[src]][x]
        if prev is not None and prev != index[dst]:
            raise StrategyError(f"{where}: conflicting transition")
        table[index[src]][x] = index[dst]
    for m, row in enumerate(table):
        if None in row:
            x = row.index(None)
            label = arena.edges[x] if kind == GENERAL else arena.colors[x]
            raise StrategyError(f"memory: transition from {states[m]} on {label} is missing")
    mem = MemoryStructure(arena, kind, states, index[initial], table)

    moves: dict[tuple[int, int], int] = {}
    for i, rec in enumerate(_require(obj, "moves", list, "strategy")):
        where = f"moves[{i}]"
        node = _require(rec, "node", str, where)
        state = _require(rec, "state", str, where)
        if node not in arena.node_index:
            raise StrategyError(f"{where}: unknown node {node!r}")
        if state not in index:
            raise StrategyError(f"{where}: unknown state {state!r}")
        key = (arena.node_index[node], index[state])
        e = _edge_from(_require(rec, "edge", dict, where), arena, where + ".edge")
        if moves.setdefault(key, e) != e:
            raise StrategyError(f"{where}: conflicting move")
    return Strategy(mem, moves)


def strategy_to_dict(strategy: Strategy) -> dict:
    mem = strategy.memory
    arena = strategy.arena
    transitions = []
    for m, row in enumerate(mem.table):
        for x, nxt in enumerate(row):
            rec = {"from": mem.states[m]}
            if mem.kind == GENERAL:
                rec["edge"] = _edge_dict(arena.edges[x])
            else:
                rec["color"] = arena.colors[x]
            rec["to"] = mem.states[nxt]
            transitions.append(rec)
    moves = []
    for v in arena.nodes_of(0):
        for m in range(mem.size):
            if (v, m) in strategy.moves:
                moves.append({"node": arena.node_ids[v], "state": mem.states[m],
                              "edge": _edge_dict(arena.edges[strategy.moves[v, m]])})
    return {
        "memory": {"kind": mem.kind, "states": list(mem.states), "initial": mem.states[mem.initial],
                   "transitions": transitions},
        "moves": moves,
    }


def parse_strategy(text: str, arena: Arena) -> Strategy:
    return strategy_from_dict(load_json(text, "strategy"), arena)


def serialize_strategy(strategy: Strategy) -> str:
    return dump_json(strategy_to_dict(strategy))
