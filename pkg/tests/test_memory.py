import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from chromem.arena import Edge, Path, make_arena
from chromem.lowerbound import gen_arena, gen_s1
from chromem.memory import (CHROMATIC, GENERAL, MemoryStructure, MissingMoveError, Strategy, StrategyError,
                            consistent, is_chromatic, memoryless, parse_strategy, run_memory,
                            serialize_strategy, strategy_move, to_chromatic)

from helpers import random_arena, random_strategy


@pytest.fixture
def lb():
    a = gen_arena(1, 2)
    return a, gen_s1(1, 2, a)


def test_run_memory_empty_is_identity(lb):
    a, s1 = lb
    for m in s1.memory.states:
        assert run_memory(s1.memory, m, []) == m


def test_run_memory_y_increments(lb):
    a, s1 = lb
    assert run_memory(s1.memory, "0", [("v0", "y", "v0")]) == "1"
    assert run_memory(s1.memory, "1", [("v0", "y", "v0")]) == "0"


def test_run_memory_reset_edge(lb):
    a, s1 = lb
    assert run_memory(s1.memory, "1", [("v0", "x", "v1")]) == "0"
    assert run_memory(s1.memory, "1", [("v1", "x", "v0")]) == "1"


def test_run_memory_unknown_edge(lb):
    a, s1 = lb
    with pytest.raises(KeyError):
        run_memory(s1.memory, "0", [("v0", "q", "v0")])


def test_is_chromatic(lb):
    a, s1 = lb
    assert not is_chromatic(s1.memory, a)
    assert is_chromatic(memoryless(a).memory, a)
    # general kind whose transitions only look at colors
    table = [[1 if e.color == "y" else 0 for e in a.edges], [0 if e.color == "y" else 1 for e in a.edges]]
    mem = MemoryStructure(a, GENERAL, ["p", "q"], 0, table)
    assert is_chromatic(mem, a)
    chrom = to_chromatic(mem)
    assert chrom.kind == CHROMATIC
    for m in range(2):
        for e in range(len(a.edges)):
            assert chrom.step(m, e) == mem.step(m, e)
    with pytest.raises(StrategyError):
        to_chromatic(s1.memory)


def _path(a, start, triples):
    return Path(a.node(start), tuple(a.edge(t) for t in triples))


def test_consistent_examples(lb):
    a, s1 = lb
    for v in a.node_ids:
        assert consistent(s1, Path(a.node(v), ()))
    prefix = [("u", "z", "v0"), ("v0", "y", "v0"), ("v0", "z", "t")]
    assert not consistent(s1, _path(a, "u", prefix + [("t", "c", "v0")]))
    assert consistent(s1, _path(a, "u", prefix + [("t", "d", "v0")]))
    assert consistent(s1, _path(a, "u", [("u", "z", "v0"), ("v0", "z", "t"), ("t", "c", "v0")]))


def test_consistent_first_move_at_player0_start(lb):
    a, s1 = lb
    assert consistent(s1, _path(a, "t", [("t", "c", "v0")]))
    assert not consistent(s1, _path(a, "t", [("t", "d", "v0")]))


def test_strategy_move(lb):
    a, s1 = lb
    assert strategy_move(s1, "t", "0") == Edge("t", "c", "v0")
    assert strategy_move(s1, "t", "1") == Edge("t", "d", "v0")
    ml = memoryless(a, {"t": ("t", "d", "v0")})
    assert strategy_move(ml, "t", "m0") == Edge("t", "d", "v0")
    with pytest.raises(StrategyError):
        strategy_move(s1, "u", "0")


def test_missing_move_raises():
    a = make_arena([("v", 0)], [("v", "a", "v")])
    mem = MemoryStructure(a, CHROMATIC, ["m"], 0, [[0]])
    s = Strategy(mem, {})
    with pytest.raises(MissingMoveError):
        s.move(0, 0)
    with pytest.raises(MissingMoveError):
        strategy_move(s, "v", "m")


def test_strategy_rejects_bad_moves(lb):
    a, s1 = lb
    with pytest.raises(StrategyError):
        Strategy(s1.memory, {(a.node("u"), 0): a.edge(("u", "z", "v0"))})
    with pytest.raises(StrategyError):
        Strategy(s1.memory, {(a.node("t"), 0): a.edge(("u", "z", "v0"))})


def test_memory_structure_invariants(lb):
    a, _ = lb
    with pytest.raises(StrategyError):
        MemoryStructure(a, CHROMATIC, ["m"], 1, [[0] * 5])
    with pytest.raises(StrategyError):
        MemoryStructure(a, CHROMATIC, ["m"], 0, [[0] * 4])
    with pytest.raises(StrategyError):
        MemoryStructure(a, "fancy", ["m"], 0, [[0] * 5])


def test_gen_s1_state_count_and_kind():
    for n, q in [(1, 1), (1, 2), (2, 3), (3, 2)]:
        s1 = gen_s1(n, q)
        assert s1.q == q and s1.memory.kind == GENERAL
        assert is_chromatic(s1.memory) == (q == 1)


def test_strategy_file_round_trip(lb):
    a, s1 = lb
    text = serialize_strategy(s1)
    back = parse_strategy(text, a)
    assert serialize_strategy(back) == text
    assert back.memory.table == s1.memory.table and back.moves == s1.moves
    ml = memoryless(a)
    assert serialize_strategy(parse_strategy(serialize_strategy(ml), a)) == serialize_strategy(ml)
    obj = json.loads(serialize_strategy(ml))
    assert obj["memory"]["kind"] == "chromatic" and "color" in obj["memory"]["transitions"][0]


def test_general_file_that_factors_is_not_promoted(lb):
    a, _ = lb
    text = serialize_strategy(memoryless(a)).replace('"chromatic"', '"general"')
    # color-keyed transitions are not valid for a general file
    from chromem.arena import FormatError
    with pytest.raises(FormatError):
        parse_strategy(text, a)
    table = [[0] * len(a.edges)]
    mem = MemoryStructure(a, GENERAL, ["m0"], 0, table)
    s = Strategy(mem, {(a.node("t"), 0): a.edge(("t", "c", "v0"))})
    back = parse_strategy(serialize_strategy(s), a)
    assert back.memory.kind == GENERAL and is_chromatic(back.memory)


@pytest.mark.parametrize("mutate, err", [
    (lambda o: o["memory"].update(initial="zz"), StrategyError),
    (lambda o: o["memory"]["transitions"].pop(), StrategyError),
    (lambda o: o["moves"][0].update(node="nowhere"), StrategyError),
    (lambda o: o["memory"].update(kind="odd"), ValueError),
    (lambda o: o["moves"][0]["edge"].update(color="q"), StrategyError),
])
def test_strategy_file_errors(lb, mutate, err):
    a, s1 = lb
    obj = json.loads(serialize_strategy(s1))
    mutate(obj)
    with pytest.raises(err):
        parse_strategy(json.dumps(obj), a)


def _random_path(rng, a, length):
    v = rng.randrange(a.n)
    start = v
    edges = []
    for _ in range(length):
        e = rng.choice(a.out[v])
        edges.append(e)
        v = a.edge_target[e]
    return start, edges


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_fold_law_and_prefix_consistency(seed):
    rng = random.Random(seed)
    a = random_arena(rng)
    s = random_strategy(rng, a, rng.randint(1, 3))
    start, edges = _random_path(rng, a, rng.randint(0, 12))
    mem = s.memory
    for k in range(len(edges)):
        before = mem.state(run_memory(mem, mem.initial, edges[:k]))
        after = mem.state(run_memory(mem, mem.initial, edges[:k + 1]))
        assert after == mem.step(before, edges[k])
    # follow the strategy to build a consistent path, then check all prefixes
    v, m, walk = start, mem.initial, []
    for _ in range(10):
        e = s.move(v, m) if a.owner[v] == 0 else rng.choice(a.out[v])
        walk.append(e)
        m = mem.step(m, e)
        v = a.edge_target[e]
    p = Path(start, tuple(walk))
    assert consistent(s, p)
    for k in range(len(walk)):
        assert consistent(s, Path(start, tuple(walk[:k])))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_chromatic_memory_reads_colors_only(seed):
    rng = random.Random(seed)
    a = random_arena(rng)
    s = random_strategy(rng, a, rng.randint(1, 3), kind=CHROMATIC)
    mem = s.memory
    _, p1 = _random_path(rng, a, rng.randint(0, 10))
    # any other edge sequence with the same coloring, not necessarily a path
    by_color = {}
    for e in range(len(a.edges)):
        by_color.setdefault(a.edge_color[e], []).append(e)
    p2 = [rng.choice(by_color[a.edge_color[e]]) for e in p1]
    assert mem.run(mem.initial, p1) == mem.run(mem.initial, p2)
