"""Finite edge-colored arenas: data model, validation, JSON I/O and DOT export.

Node ids, colors and edges keep the order in which they appear in the input.
That order is the tie-break source for every deterministic choice made by the
rest of the package, so it is preserved everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence


class FormatError(ValueError):
    """Input text is not well-formed (bad JSON or wrong schema)."""


class ArenaError(ValueError):
    """An arena violates one of the structural invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class Edge:
    source: str
    color: str
    target: str

    def __str__(self):
        return f"({self.source}, {self.color}, {self.target})"


@dataclass(frozen=True)
class Path:
    """A finite path given by its start node and a tuple of edge indices.

    An empty ``edges`` tuple is the 0-length path at ``start``.
    """

    start: int
    edges: tuple = ()

    def target(self, arena: "Arena") -> int:
        return arena.edge_target[self.edges[-1]] if self.edges else self.start

    def colors(self, arena: "Arena") -> tuple:
        return tuple(arena.colors[arena.edge_color[e]] for e in self.edges)

    def is_valid(self, arena: "Arena") -> bool:
        here = self.start
        for e in self.edges:
            if arena.edge_source[e] != here:
                return False
            here = arena.edge_target[e]
        return True

    def extend(self, edge: int) -> "Path":
        return Path(self.start, self.edges + (edge,))


class Arena:
    """An arena over a finite set of colors.

    ``nodes`` is a sequence of ``(id, owner)`` pairs and ``edges`` a sequence
    of ``(source, color, target)`` triples.  Construction never raises on
    semantic problems (use :func:`validate` or :meth:`check`); it only builds
    the dense integer views used by the algorithms.
    """

    def __init__(self, nodes: Iterable[tuple[str, int]], edges: Iterable[tuple[str, str, str]]):
        self.node_ids: tuple[str, ...] = tuple(str(v) for v, _ in nodes)
        self.owner: tuple[int, ...] = tuple(int(o) for _, o in nodes)
        self.edges: tuple[Edge, ...] = tuple(Edge(str(s), str(c), str(t)) for s, c, t in edges)

        self.node_index: dict[str, int] = {}
        for i, v in enumerate(self.node_ids):
            self.node_index.setdefault(v, i)

        colors: dict[str, int] = {}
        for e in self.edges:
            colors.setdefault(e.color, len(colors))
        self.colors: tuple[str, ...] = tuple(colors)
        self.color_index: dict[str, int] = colors

        self.edge_source = tuple(self.node_index.get(e.source, -1) for e in self.edges)
        self.edge_target = tuple(self.node_index.get(e.target, -1) for e in self.edges)
        self.edge_color = tuple(colors[e.color] for e in self.edges)
        self.edge_index: dict[Edge, int] = {}
        for i, e in enumerate(self.edges):
            self.edge_index.setdefault(e, i)

        out: list[list[int]] = [[] for _ in self.node_ids]
        for i, s in enumerate(self.edge_source):
            if s >= 0:
                out[s].append(i)
        self.out: tuple[tuple[int, ...], ...] = tuple(tuple(x) for x in out)
        inc: list[list[int]] = [[] for _ in self.node_ids]
        for i, t in enumerate(self.edge_target):
            if t >= 0:
                inc[t].append(i)
        self.inc: tuple[tuple[int, ...], ...] = tuple(tuple(x) for x in inc)

    @property
    def n(self) -> int:
        return len(self.node_ids)

    def __repr__(self):
        return f"Arena(n={self.n}, edges={len(self.edges)}, colors={list(self.colors)})"

    def __eq__(self, other):
        if not isinstance(other, Arena):
            return NotImplemented
        return (self.node_ids, self.owner, self.edges) == (other.node_ids, other.owner, other.edges)

    def __hash__(self):
        return hash((self.node_ids, self.owner, self.edges))

    def node(self, v) -> int:
        """Resolve a node id (or an index) to its dense index."""
        if isinstance(v, int):
            if not 0 <= v < self.n:
                raise KeyError(f"unknown node index: {v}")
            return v
        try:
            return self.node_index[v]
        except KeyError:
            raise KeyError(f"unknown node: {v}") from None

    def edge(self, e) -> int:
        """Resolve an :class:`Edge` (or an index) to its dense index."""
        if isinstance(e, int):
            if not 0 <= e < len(self.edges):
                raise KeyError(f"unknown edge index: {e}")
            return e
        if isinstance(e, tuple) and not isinstance(e, Edge):
            e = Edge(*e)
        try:
            return self.edge_index[e]
        except KeyError:
            raise KeyError(f"unknown edge: {e}") from None

    def color(self, c) -> int:
        if isinstance(c, int):
            return c
        try:
            return self.color_index[c]
        except KeyError:
            raise KeyError(f"unknown color: {c}") from None

    def in_edges(self, v: int) -> tuple[int, ...]:
        return self.inc[v]

    def nodes_of(self, player: int) -> list[int]:
        return [i for i, o in enumerate(self.owner) if o == player]

    def check(self) -> "Arena":
        problems = validate(self)
        if problems:
            raise ArenaError(problems)
        return self

    def to_dict(self) -> dict:
        return {
            "nodes": [{"id": v, "owner": o} for v, o in zip(self.node_ids, self.owner)],
            "edges": [{"source": e.source, "color": e.color, "target": e.target} for e in self.edges],
        }


def validate(arena: Arena) -> list[str]:
    """List every invariant violation of ``arena``; an empty list means valid."""
    problems = []
    if arena.n == 0:
        problems.append("empty arena")
    seen = set()
    for v in arena.node_ids:
        if not v:
            problems.append("empty node id")
        if v in seen:
            problems.append(f"duplicate node id: {v}")
        seen.add(v)
    for v, o in zip(arena.node_ids, arena.owner):
        if o not in (0, 1):
            problems.append(f"bad owner for {v}: {o}")
    triples = set()
    for e in arena.edges:
        if not e.color:
            problems.append(f"empty color on edge {e}")
        for end in (e.source, e.target):
            if end not in arena.node_index:
                problems.append(f"dangling endpoint: {end} in edge {e}")
        if e in triples:
            problems.append(f"duplicate edge {e}")
        triples.add(e)
    for i, v in enumerate(arena.node_ids):
        if arena.node_index.get(v) == i and not arena.out[i]:
            problems.append(f"zero out-degree: {v}")
    return problems


def out_edges(arena: Arena, v) -> list[Edge]:
    return [arena.edges[e] for e in arena.out[arena.node(v)]]


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{where}: missing key {key!r}")
    val = obj[key]
    if kind is str and not isinstance(val, str):
        raise FormatError(f"{where}: {key!r} must be a string")
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        raise FormatError(f"{where}: {key!r} must be an integer")
    if kind is list and not isinstance(val, list):
        raise FormatError(f"{where}: {key!r} must be an array")
    if kind is dict and not isinstance(val, dict):
        raise FormatError(f"{where}: {key!r} must be an object")
    return val


def load_json(text: str, what: str = "input"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what}: syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def arena_from_dict(obj) -> Arena:
    nodes = []
    for i, rec in enumerate(_require(obj, "nodes", list, "arena")):
        nodes.append((_require(rec, "id", str, f"nodes[{i}]"), _require(rec, "owner", int, f"nodes[{i}]")))
    edges = []
    for i, rec in enumerate(_require(obj, "edges", list, "arena")):
        where = f"edges[{i}]"
        edges.append((_require(rec, "source", str, where), _require(rec, "color", str, where),
                      _require(rec, "target", str, where)))
    return Arena(nodes, edges)


def parse_arena(text: str) -> Arena:
    """Parse and validate an arena file.

    Raises :class:`FormatError` on malformed input and :class:`ArenaError`
    listing the violations on semantically invalid arenas.
    """
    return arena_from_dict(load_json(text, "arena")).check()


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def serialize_arena(arena: Arena) -> str:
    return dump_json(arena.to_dict())


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(arena: Arena, name: str = "arena") -> str:
    """Graphviz description: Player 0 nodes are boxes, Player 1 nodes circles."""
    lines = [f"digraph {_dot_quote(name)} {{"]
    for v, o in zip(arena.node_ids, arena.owner):
        shape = "box" if o == 0 else "circle"
        lines.append(f"  {_dot_quote(v)} [shape={shape}];")
    for e in arena.edges:
        lines.append(f"  {_dot_quote(e.source)} -> {_dot_quote(e.target)} [label={_dot_quote(e.color)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def make_arena(nodes: Sequence[tuple[str, int]], edges: Sequence[tuple[str, str, str]]) -> Arena:
    """Build and validate an arena from Python literals."""
    return Arena(nodes, edges).check()
