"""The one-player consecutive-ones arena.

Colors are 0 and 1 and Player 0 owns every node.  From ``u`` a fixed path
colored 0011 reaches ``v``.  At ``v`` Player 0 either enters a loop colored
001111 that returns to ``v``, or exits by a 1-edge to ``r``, which has a
0-colored self-loop.  The best play loops once and then exits, producing five
consecutive 1's; the reference strategy remembers whether ``v`` was left
before, which a chromatic memory cannot express with two states.
"""

from __future__ import annotations

from .arena import Arena, make_arena
from .memory import GENERAL, MemoryStructure, Strategy

LEAD = "0011"
LOOP = "001111"


def consecutive_ones_arena() -> Arena:
    nodes = [("u", 0), ("a1", 0), ("a2", 0), ("a3", 0), ("v", 0)]
    nodes += [(f"l{i}", 0) for i in range(1, len(LOOP))]
    nodes.append(("r", 0))
    lead = ["u", "a1", "a2", "a3", "v"]
    edges = [(lead[i], LEAD[i], lead[i + 1]) for i in range(len(LEAD))]
    loop = ["v"] + [f"l{i}" for i in range(1, len(LOOP))] + ["v"]
    edges += [(loop[i], LOOP[i], loop[i + 1]) for i in range(len(LOOP))]
    edges.append(("v", "1", "r"))
    edges.append(("r", "0", "r"))
    return make_arena(nodes, edges)


def consecutive_ones_strategy(arena: Arena | None = None) -> Strategy:
    """Two states: before and after the first edge out of ``v``."""
    arena = arena or consecutive_ones_arena()
    v = arena.node("v")
    table = [[1 if arena.edge_source[e] == v else 0 for e in range(len(arena.edges))],
             [1] * len(arena.edges)]
    mem = MemoryStructure(arena, GENERAL, ["fresh", "visited"], 0, table)
    loop_entry = arena.edge(("v", LOOP[0], "l1"))
    exit_edge = arena.edge(("v", "1", "r"))
    moves = {}
    for w in range(arena.n):
        for m in range(2):
            moves[w, m] = arena.out[w][0]
    moves[v, 0] = loop_entry
    moves[v, 1] = exit_edge
    return Strategy(mem, moves)


def longest_run(word, symbol: str = "1") -> int:
    best = cur = 0
    for ch in word:
        cur = cur + 1 if ch == symbol else 0
        best = max(best, cur)
    return best
