"""Random instance generators and brute-force oracles shared by the tests.

The oracles walk arena paths directly and simulate memory by hand; they do
not use play graphs or the subset construction.
"""

from __future__ import annotations

import random
from collections import defaultdict
from contextlib import contextmanager

from chromem.arena import make_arena
from chromem.chromatize import NodePreorder
from chromem.memory import GENERAL, MemoryStructure, Strategy

ACCEPTANCE: list[str] = []

COLORS = "abc"


@contextmanager
def criterion(num: int, title: str):
    """Record a PASS/FAIL line for an acceptance criterion."""
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE.append(f"FAIL criterion {num}: {title} ({type(exc).__name__}: {exc})")
        raise
    ACCEPTANCE.append(f"PASS criterion {num}: {title}")


def random_arena(rng: random.Random, max_nodes=5, max_colors=3, max_out=3):
    n = rng.randint(1, max_nodes)
    k = rng.randint(1, max_colors)
    names = [f"n{i}" for i in range(n)]
    nodes = [(v, rng.randint(0, 1)) for v in names]
    edges = []
    seen = set()
    for v in names:
        for _ in range(rng.randint(1, max_out)):
            e = (v, COLORS[rng.randrange(k)], rng.choice(names))
            if e not in seen:
                seen.add(e)
                edges.append(e)
    rng.shuffle(edges)
    return make_arena(nodes, edges)


def random_strategy(rng: random.Random, arena, q: int, kind=GENERAL):
    width = len(arena.edges) if kind == GENERAL else len(arena.colors)
    table = [[rng.randrange(q) for _ in range(width)] for _ in range(q)]
    mem = MemoryStructure(arena, kind, [f"m{i}" for i in range(q)], 0, table)
    moves = {(v, m): rng.choice(arena.out[v]) for v in arena.nodes_of(0) for m in range(q)}
    return Strategy(mem, moves)


def random_start(rng: random.Random, arena):
    k = rng.randint(1, arena.n)
    return rng.sample(list(arena.node_ids), k)


def random_preorder(rng: random.Random, arena) -> NodePreorder:
    ids = list(arena.node_ids)
    rng.shuffle(ids)
    classes, cur = [], []
    for v in ids:
        cur.append(v)
        if rng.random() < 0.5:
            classes.append(tuple(cur))
            cur = []
    if cur:
        classes.append(tuple(cur))
    return NodePreorder(tuple(classes))


# -- oracles -------------------------------------------------------------------

def consistent_paths(arena, strategy, starts, depth):
    """Every consistent path of length <= depth as (start, edges, memory index, colors)."""
    mem = strategy.memory
    out = []

    def walk(start, here, m, edges, cols):
        out.append((start, tuple(edges), m, tuple(cols)))
        if len(edges) == depth:
            return
        if arena.owner[here] == 0:
            choices = [strategy.move(here, m)]
        else:
            choices = arena.out[here]
        for e in choices:
            edges.append(e)
            cols.append(arena.colors[arena.edge_color[e]])
            walk(start, arena.edge_target[e], mem.step(m, e), edges, cols)
            edges.pop()
            cols.pop()

    for v in dict.fromkeys(arena.node(s) for s in starts):
        walk(v, v, mem.initial, [], [])
    return out


def brute_traces(arena, strategy, starts, depth) -> set:
    return {cols for _, _, _, cols in consistent_paths(arena, strategy, starts, depth)}


def endpoints_by_coloring(arena, strategy, starts, depth):
    """coloring -> set of (start, target, memory index) over consistent paths."""
    table = defaultdict(set)
    for start, edges, m, cols in consistent_paths(arena, strategy, starts, depth):
        target = arena.edge_target[edges[-1]] if edges else start
        table[cols].add((start, target, m))
    return table


def reachable_pairs(arena, strategy, starts):
    """(node, state) pairs reachable under the strategy, by plain DFS."""
    mem = strategy.memory
    seen = set()
    stack = [(arena.node(v), mem.initial) for v in starts]
    while stack:
        v, m = stack.pop()
        if (v, m) in seen:
            continue
        seen.add((v, m))
        edges = [strategy.move(v, m)] if arena.owner[v] == 0 else arena.out[v]
        for e in edges:
            stack.append((arena.edge_target[e], mem.step(m, e)))
    return seen


def unique_play(arena, strategy, start, steps):
    here = arena.node(start)
    m = strategy.memory.initial
    word = []
    for _ in range(steps):
        assert len(arena.out[here]) == 1 or arena.owner[here] == 0
        e = strategy.move(here, m) if arena.owner[here] == 0 else arena.out[here][0]
        word.append(arena.colors[arena.edge_color[e]])
        m = strategy.memory.step(m, e)
        here = arena.edge_target[e]
    return "".join(word)



def proof_obligations(arena, s1, s2, starts, depth, ranks=None):
    """Violations of the soundness and completeness invariants of a chromatized S2.

    Winning mode (``ranks`` is None): after every consistent prefix p of S2
    from ``starts``, each known entry f(v) = m must be witnessed by an
    S1-consistent path from ``starts`` to v colored like p and ending in m,
    and f(target(p)) must be known.  Preference mode: entries are
    (origin, m), the witness must start at the origin, and
    rank(source(p)) <= rank(origin of f(target(p))).
    """
    witnesses = endpoints_by_coloring(arena, s1, starts, depth)
    problems = []
    for start, edges, k, cols in consistent_paths(arena, s2, starts, depth):
        f = s2.memory.annotations[k]
        target = arena.edge_target[edges[-1]] if edges else start
        ends = witnesses.get(cols, set())
        for v, entry in enumerate(f):
            if entry is None:
                continue
            if ranks is None:
                ok = any(t == v and m == entry for _, t, m in ends)
            else:
                ok = (entry[0], v, entry[1]) in ends
            if not ok:
                problems.append(("soundness", start, cols, arena.node_ids[v]))
        if f[target] is None:
            problems.append(("completeness", start, cols, arena.node_ids[target]))
        elif ranks is not None and ranks[start] > ranks[f[target][0]]:
            problems.append(("preorder", start, cols, arena.node_ids[target]))
    return problems
