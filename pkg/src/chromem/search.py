"""Exhaustive search for the smallest memory that matches a reference strategy.

A candidate strategy passes when its traces from U are included in the traces
of the reference from U.  Two independent exhaustive procedures are offered:

``enumerate``
    Every canonical chromatic transition table (state 0 initial, states
    numbered in BFS order over colors) crossed with every next-move table over
    the reachable Player 0 pairs, each checked against the determinized
    reference.  Runs in the compiled kernel when available.

``pruned``
    Depth-first construction of the tables while exploring the product with
    the determinized reference.  Entries are only chosen when the exploration
    needs them, and a branch is dropped as soon as a violating trace uses only
    chosen entries, since every completion of that branch fails too.  Works for
    chromatic and general memory alike.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from . import _kernels_py
from .arena import Arena
from .kernels import FlatArena, get_backend
from .memory import CHROMATIC, GENERAL, MemoryStructure, Strategy
from .playgraph import ColorDFA, build_play_graph, determinize, trace_inclusion


class SearchBudgetExceeded(RuntimeError):
    """The candidate cap ran out before a level was fully examined."""

    def __init__(self, level, levels):
        self.level = level
        self.levels = levels
        super().__init__(f"candidate budget exhausted while examining {level} states")


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 4
    max_candidates: int | None = None
    max_macro: int = 1 << 20

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be at least 1")


@dataclass
class LevelReport:
    states: int
    tables: int
    candidates: int
    passing: int | None
    found: bool
    complete: bool
    seconds: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SearchResult:
    """Outcome of a minimal-memory search; ``minimal`` is None when nothing fits the budget."""

    minimal: int | None
    witness: Strategy | None
    levels: list[LevelReport] = field(default_factory=list)
    method: str = "enumerate"

    @property
    def found(self) -> bool:
        return self.minimal is not None


def reference_automaton(arena: Arena, reference: Strategy, U: Iterable, max_macro: int = 1 << 20) -> ColorDFA:
    return determinize(build_play_graph(arena, reference, U), arena.colors, max_macro)


def strategy_from_tables(arena: Arena, Q: int, sigma, moves, kind: str = CHROMATIC) -> Strategy:
    width = len(arena.colors) if kind == CHROMATIC else len(arena.edges)
    table = [list(sigma[m * width:(m + 1) * width]) for m in range(Q)]
    mem = MemoryStructure(arena, kind, [str(i) for i in range(Q)], 0, table)
    mv = {}
    for v in arena.nodes_of(0):
        for m in range(Q):
            e = moves[v * Q + m]
            mv[v, m] = e if e >= 0 else arena.out[v][0]
    return Strategy(mem, mv)


def _starts(arena: Arena, U) -> list[int]:
    starts = list(dict.fromkeys(arena.node(v) for v in U)) if U is not None else list(range(arena.n))
    if not starts:
        raise ValueError("start set U must be non-empty")
    return starts


def enumerate_chromatic_strategies(arena: Arena, Q: int, U: Iterable | None = None) -> Iterator[Strategy]:
    """Every chromatic Q-state strategy up to renaming of memory states.

    Next-move tables range over the Player 0 pairs reachable from U (default:
    all nodes) in the arena-memory product; other pairs take the first edge.
    """
    if Q < 1:
        raise ValueError("Q must be at least 1")
    flat = FlatArena.of(arena)
    starts = _starts(arena, U)
    n, owner, out_ptr, out_edges, e_tgt, e_col, C = flat.args()
    for sigma in _kernels_py.canonical_tables(Q, C):
        pairs = _kernels_py.reachable_choice_pairs(n, owner, out_ptr, out_edges, e_tgt, e_col, C, sigma, Q, starts)
        radix = [out_ptr[v + 1] - out_ptr[v] for v, _ in pairs]
        digits = [0] * len(pairs)
        while True:
            moves = [-1] * (n * Q)
            for (v, m), d in zip(pairs, digits):
                moves[v * Q + m] = out_edges[out_ptr[v] + d]
            yield strategy_from_tables(arena, Q, sigma, moves)
            j = len(digits) - 1
            while j >= 0:
                digits[j] += 1
                if digits[j] < radix[j]:
                    break
                digits[j] = 0
                j -= 1
            if j < 0:
                break


# -- pruned search -------------------------------------------------------------

class _Pruned:
    def __init__(self, arena: Arena, dfa: ColorDFA, starts, Q: int, kind: str, node_limit: int | None):
        self.arena = arena
        self.rtab = dfa.table
        self.r0 = dfa.initial
        self.starts = starts
        self.Q = Q
        self.kind = kind
        self.width = len(arena.colors) if kind == CHROMATIC else len(arena.edges)
        self.nodes = 0
        self.refuted = 0
        self.node_limit = node_limit
        self.exhausted = False

    def run(self):
        init = {(v, 0, self.r0) for v in self.starts}
        stack = sorted(init, reverse=True)
        sigma = [-1] * (self.Q * self.width)
        moves = [-1] * (self.arena.n * self.Q)
        return self._explore(sigma, moves, 1, set(init), stack)

    def _explore(self, sigma, moves, used, seen, stack):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.exhausted = True
            return None
        arena = self.arena
        Q = self.Q
        while stack:
            v, m, r = stack.pop()
            if arena.owner[v] == 0:
                e = moves[v * Q + m]
                if e < 0:
                    stack.append((v, m, r))
                    for choice in arena.out[v]:
                        mv = list(moves)
                        mv[v * Q + m] = choice
                        found = self._explore(list(sigma), mv, used, set(seen), list(stack))
                        if found is not None or self.exhausted:
                            return found
                    return None
                edges = (e,)
            else:
                edges = arena.out[v]
            for e in edges:
                c = arena.edge_color[e]
                r2 = self.rtab[r][c]
                if r2 < 0:
                    self.refuted += 1
                    return None
                key = m * self.width + (c if self.kind == CHROMATIC else e)
                m2 = sigma[key]
                if m2 < 0:
                    stack.append((v, m, r))
                    for val in range(min(used + 1, Q)):
                        sg = list(sigma)
                        sg[key] = val
                        found = self._explore(sg, list(moves), max(used, val + 1), set(seen), list(stack))
                        if found is not None or self.exhausted:
                            return found
                    return None
                child = (arena.edge_target[e], m2, r2)
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        sigma = [0 if x < 0 else x for x in sigma]
        return strategy_from_tables(arena, Q, sigma, moves, self.kind), used


def _pruned_level(arena, dfa, starts, Q, kind, node_limit):
    t0 = time.perf_counter()
    engine = _Pruned(arena, dfa, starts, Q, kind, node_limit)
    found = engine.run()
    report = LevelReport(Q, engine.nodes, engine.refuted, None, found is not None,
                         not engine.exhausted, time.perf_counter() - t0)
    return report, (found[0] if found else None)


def _enumerate_level(arena, dfa, starts, Q, backend, limit):
    t0 = time.perf_counter()
    kern = get_backend(backend)
    flat = FlatArena.of(arena)
    tables, cands, passing, witness, complete = kern.search_level(
        *flat.args(), Q, dfa.flat(), dfa.initial, starts, True, limit or 0)
    report = LevelReport(Q, tables, cands, passing, witness is not None, complete,
                         time.perf_counter() - t0)
    strategy = strategy_from_tables(arena, Q, *witness) if witness else None
    return report, strategy


def _minimize(arena, reference, U, budget, kind, method, backend):
    budget = budget or SearchBudget()
    starts = _starts(arena, U)
    dfa = reference_automaton(arena, reference, starts, budget.max_macro)
    levels = []
    for Q in range(1, budget.max_states + 1):
        if method == "enumerate":
            if kind != CHROMATIC:
                raise ValueError("the enumerate method covers chromatic memory only")
            report, witness = _enumerate_level(arena, dfa, starts, Q, backend, budget.max_candidates)
        elif method == "pruned":
            report, witness = _pruned_level(arena, dfa, starts, Q, kind, budget.max_candidates)
        else:
            raise ValueError(f"unknown search method {method!r}")
        levels.append(report)
        if witness is not None:
            verdict = trace_inclusion(build_play_graph(arena, witness, starts),
                                      build_play_graph(arena, reference, starts))
            if not verdict.holds:
                raise AssertionError(f"search witness fails inclusion: {verdict.word()}")
            return SearchResult(Q, witness, levels, method)
        if not report.complete:
            raise SearchBudgetExceeded(Q, levels)
    return SearchResult(None, None, levels, method)


def min_chromatic_states(arena: Arena, reference: Strategy, U: Iterable, budget: SearchBudget | None = None,
                         method: str = "enumerate", backend: str | None = None) -> SearchResult:
    """Smallest Q such that some chromatic Q-state strategy's traces from U lie in the reference's.

    ``budget.max_candidates`` caps candidates per level (search-tree nodes for
    the pruned method); running out raises :class:`SearchBudgetExceeded`.
    """
    return _minimize(arena, reference, U, budget, CHROMATIC, method, backend)


def min_general_states(arena: Arena, reference: Strategy, U: Iterable,
                       budget: SearchBudget | None = None) -> SearchResult:
    """Same as :func:`min_chromatic_states` for memory that reads edges (pruned search)."""
    return _minimize(arena, reference, U, budget, GENERAL, "pruned", None)


def count_level(arena: Arena, reference: Strategy, U: Iterable, Q: int, backend: str | None = None,
                limit: int = 0) -> LevelReport:
    """Check every canonical Q-state chromatic candidate and count the passing ones."""
    starts = _starts(arena, U)
    dfa = reference_automaton(arena, reference, starts)
    t0 = time.perf_counter()
    tables, cands, passing, witness, complete = get_backend(backend).search_level(
        *FlatArena.of(arena).args(), Q, dfa.flat(), dfa.initial, starts, False, limit)
    return LevelReport(Q, tables, cands, passing, passing > 0, complete, time.perf_counter() - t0)


def passing_candidates(arena: Arena, reference: Strategy, U: Iterable, Q: int) -> Iterator[Strategy]:
    """Enumerated chromatic Q-state candidates that pass inclusion (checked in Python)."""
    starts = _starts(arena, U)
    dfa = reference_automaton(arena, reference, starts)
    flat = FlatArena.of(arena)
    for cand in enumerate_chromatic_strategies(arena, Q, starts):
        sigma = [x for row in cand.memory.table for x in row]
        moves = [cand.moves.get((v, m), -1) for v in range(arena.n) for m in range(Q)]
        if _kernels_py.check_candidate(*flat.args(), sigma, Q, moves, dfa.flat(), dfa.initial, starts):
            yield cand
