"""Command-line front end.

Exit codes: 0 success (or inclusion holds), 1 semantic failure, 2 usage or
format error.  With ``--json`` every command prints a RunReport instead of
the human-readable lines.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from pathlib import Path as FsPath

from .arena import ArenaError, FormatError, arena_from_dict, export_dot, load_json, parse_arena, \
    serialize_arena, validate
from .chromatize import chromatize_preference, chromatize_winning, nominal_bounds, parse_preorder, \
    reachable_state_count
from .lowerbound import check_kappa, distinguishing_word, f_value, g_word, gen_arena, gen_s1, \
    separation_states
from .memory import CHROMATIC, MemoryStructure, is_chromatic, parse_strategy, \
    serialize_strategy, to_chromatic
from .playgraph import MacroStateLimitError, build_play_graph, play_graph_dot, trace_inclusion
from .search import SearchBudget, SearchBudgetExceeded, min_chromatic_states, min_general_states


class UsageError(Exception):
    pass


class RunReport:
    """Machine-readable record of one invocation.

    ``digest`` covers the command, input digests and results but not the
    timings, so identical inputs give identical digests.
    """

    def __init__(self, argv, quiet=False):
        self.command = list(argv)
        self.inputs: dict[str, str] = {}
        self.results: dict = {}
        self.timings: dict[str, float] = {}
        self.exit_code = 0
        self.quiet = quiet

    def say(self, text: str = ""):
        if not self.quiet:
            print(text)

    def read(self, path: str) -> str:
        data = FsPath(path).read_bytes()
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            raise FormatError(f"{path}: not UTF-8 text") from None

    def timed(self, key: str, fn, *args, **kw):
        t0 = time.perf_counter()
        try:
            return fn(*args, **kw)
        finally:
            self.timings[key] = round(time.perf_counter() - t0, 6)

    def digest(self) -> str:
        core = {"command": self.command, "inputs": self.inputs, "results": self.results,
                "exit_code": self.exit_code}
        blob = json.dumps(core, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_dict(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "results": self.results,
                "timings": self.timings, "exit_code": self.exit_code, "digest": self.digest()}


def _write(path: str, text: str):
    FsPath(path).parent.mkdir(parents=True, exist_ok=True)
    FsPath(path).write_text(text, encoding="utf-8")


def _load_arena(rep: RunReport, path: str):
    return parse_arena(rep.read(path))


def _load_strategy(rep: RunReport, path: str, arena):
    return parse_strategy(rep.read(path), arena)


def _node_set(arena, text: str | None, default_all=True) -> list[str]:
    if text is None:
        if default_all:
            return list(arena.node_ids)
        raise UsageError("--from is required")
    ids = [s.strip() for s in text.split(",") if s.strip()]
    if not ids:
        raise UsageError("empty node set")
    for v in ids:
        if v not in arena.node_index:
            raise UsageError(f"unknown node {v!r}")
    return list(dict.fromkeys(ids))


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


# -- commands ------------------------------------------------------------------

def cmd_validate(args, rep: RunReport) -> int:
    arena = arena_from_dict(load_json(rep.read(args.arena), "arena"))
    problems = validate(arena)
    rep.results = {"valid": not problems, "violations": problems,
                   "nodes": arena.n, "edges": len(arena.edges), "colors": len(arena.colors)}
    if problems:
        for p in problems:
            rep.say(p)
        return 1
    rep.say(f"valid: {arena.n} nodes, {len(arena.edges)} edges, {len(arena.colors)} colors")
    return 0


def cmd_transform(args, rep: RunReport) -> int:
    if args.mode == "preference" and not args.preorder:
        raise UsageError("--mode preference requires --preorder")
    arena = _load_arena(rep, args.arena)
    s1 = _load_strategy(rep, args.strategy, arena)
    n, q = arena.n, s1.q
    if args.mode == "winning":
        U = _node_set(arena, args.from_)
        s2 = rep.timed("transform", chromatize_winning, arena, s1, U)
        bound = nominal_bounds(n, q)[0]
        expr = f"{q + 1}^{n}"
        checks = [(U, U)]
    else:
        pre = parse_preorder(rep.read(args.preorder))
        s2 = rep.timed("transform", chromatize_preference, arena, s1, pre)
        bound = nominal_bounds(n, q)[1]
        expr = f"{q * n + 1}^{n}"
        checks = [([v], pre.upper_set(v)) for v in arena.node_ids]
    reach = reachable_state_count(s2)
    failures = []
    t0 = time.perf_counter()
    for left, right in checks:
        verdict = trace_inclusion(build_play_graph(arena, s2, left), build_play_graph(arena, s1, right))
        if not verdict.holds:
            failures.append({"from": left, "against": right, "counterexample": list(verdict.counterexample)})
    rep.timings["self_check"] = round(time.perf_counter() - t0, 6)
    rep.results = {"mode": args.mode, "reachable": reach, "bound": bound, "self_check": not failures,
                   "failures": failures}
    rep.say(f"reachable={reach}, bound={bound} ({expr})")
    if failures:
        for f in failures:
            rep.say(f"self-check FAILED from {','.join(f['from'])}: {' '.join(f['counterexample'])}")
        return 1
    rep.say("self-check: inclusion holds")
    if args.out:
        _write(args.out, serialize_strategy(s2))
        rep.results["out"] = args.out
        rep.say(f"wrote {args.out}")
    return 0


def cmd_verify(args, rep: RunReport) -> int:
    arena = _load_arena(rep, args.arena)
    left = _load_strategy(rep, args.left, arena)
    right = _load_strategy(rep, args.right, arena)
    U = _node_set(arena, args.from_)
    V = _node_set(arena, args.right_from) if args.right_from else U
    verdict = rep.timed("inclusion", trace_inclusion, build_play_graph(arena, left, U),
                        build_play_graph(arena, right, V))
    rep.results = verdict.to_dict()
    if verdict.holds:
        rep.say("inclusion holds")
        return 0
    rep.say(f"counterexample: {verdict.word()}")
    return 1


def cmd_lb_gen(args, rep: RunReport) -> int:
    arena = gen_arena(args.n, args.q)
    s1 = gen_s1(args.n, args.q, arena)
    out = FsPath(args.out_dir)
    a_path = out / f"arena-n{args.n}-q{args.q}.json"
    s_path = out / f"s1-n{args.n}-q{args.q}.json"
    _write(str(a_path), serialize_arena(arena))
    _write(str(s_path), serialize_strategy(s1))
    rep.results = {"arena": str(a_path), "strategy": str(s_path), "nodes": arena.n, "edges": len(arena.edges)}
    rep.say(f"wrote {a_path} ({arena.n} nodes, {len(arena.edges)} edges)")
    rep.say(f"wrote {s_path} ({s1.q} states)")
    return 0


def cmd_lb_words(args, rep: RunReport) -> int:
    out = {}
    if args.kappa is not None:
        out["g"] = g_word(check_kappa(_ints(args.kappa), q=args.q))
        rep.say(out["g"])
    if args.k1 is not None or args.k2 is not None:
        if args.k1 is None or args.k2 is None or args.q is None:
            raise UsageError("--k1, --k2 and -q go together")
        k1, k2 = _ints(args.k1), _ints(args.k2)
        if len(k1) != len(k2):
            raise UsageError("--k1 and --k2 must have the same length")
        n = args.n if args.n is not None else len(k1)
        try:
            out["distinguishing"] = distinguishing_word(k1, k2, n, args.q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rep.say(out["distinguishing"])
    if args.f is not None:
        if args.n is None or args.q is None:
            raise UsageError("--f needs -n and -q")
        try:
            out["f"] = f_value(args.f, args.n, args.q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rep.say(str(out["f"]))
    if not out:
        raise UsageError("give --kappa, --k1/--k2 or --f")
    rep.results = out
    return 0


def cmd_lb_separate(args, rep: RunReport) -> int:
    arena = _load_arena(rep, args.arena) if args.arena else gen_arena(args.n, args.q)
    strategy = _load_strategy(rep, args.strategy, arena)
    mem: MemoryStructure = strategy.memory
    if mem.kind != CHROMATIC:
        if not is_chromatic(mem):
            rep.results = {"separates": False, "reason": "memory is not chromatic"}
            rep.say("memory is not chromatic")
            return 1
        mem = to_chromatic(mem)
    try:
        states = separation_states(mem, args.n, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    distinct = len(set(states.values()))
    ok = distinct == len(states)
    rep.results = {"separates": ok, "kappas": len(states), "distinct_states": distinct}
    rep.say(f"{distinct} distinct states for {len(states)} words z g(kappa): "
            + ("separated" if ok else "NOT separated"))
    return 0 if ok else 1


def cmd_search(args, rep: RunReport) -> int:
    arena = _load_arena(rep, args.arena)
    ref = _load_strategy(rep, args.reference, arena)
    U = _node_set(arena, args.from_)
    budget = SearchBudget(args.max_states, args.max_candidates)
    t0 = time.perf_counter()
    try:
        if args.general:
            res = min_general_states(arena, ref, U, budget)
        else:
            res = min_chromatic_states(arena, ref, U, budget, method=args.method)
        levels, exhausted = res.levels, None
    except SearchBudgetExceeded as exc:
        res, levels, exhausted = None, exc.levels, exc.level
    rep.timings["search"] = round(time.perf_counter() - t0, 6)
    rep.timings["levels"] = [round(lv.seconds, 6) for lv in levels]
    rows = []
    for lv in levels:
        row = {k: v for k, v in lv.to_dict().items() if k != "seconds"}
        rows.append(row)
        passing = "" if lv.passing is None else f" passing={lv.passing}"
        enum = not args.general and args.method == "enumerate"
        unit, unit2 = ("tables", "candidates") if enum else ("nodes", "refuted")
        rep.say(f"Q={lv.states} {unit}={lv.tables} {unit2}={lv.candidates}{passing} "
                f"complete={'yes' if lv.complete else 'no'} time={lv.seconds:.3f}s")
    rep.results = {"kind": "general" if args.general else "chromatic", "levels": rows,
                   "minimal": res.minimal if res else None, "budget_exhausted_at": exhausted}
    if exhausted is not None:
        rep.say(f"candidate budget exhausted at Q={exhausted}")
        return 1
    if res.minimal is None:
        rep.say(f"no strategy with at most {args.max_states} states")
        return 1
    rep.say(f"minimal={res.minimal}")
    if args.out:
        _write(args.out, serialize_strategy(res.witness))
        rep.results["out"] = args.out
        rep.say(f"wrote {args.out}")
    return 0


def cmd_simulate(args, rep: RunReport) -> int:
    arena = _load_arena(rep, args.arena)
    strategy = _load_strategy(rep, args.strategy, arena)
    if args.steps < 0:
        raise UsageError("--steps must be non-negative")
    seed = args.sim_seed if args.sim_seed is not None else args.seed
    rng = random.Random(seed)
    here = arena.node(_node_set(arena, args.from_, default_all=False)[0])
    m = strategy.memory.initial
    word, nodes = [], [arena.node_ids[here]]
    for _ in range(args.steps):
        if arena.owner[here] == 0:
            e = strategy.move(here, m)
        else:
            e = rng.choice(arena.out[here])
        word.append(arena.edge_color[e])
        m = strategy.memory.step(m, e)
        here = arena.edge_target[e]
        nodes.append(arena.node_ids[here])
    colors = [arena.colors[c] for c in word]
    rep.results = {"seed": seed, "word": colors, "nodes": nodes}
    rep.say(" ".join(colors))
    return 0


def cmd_dot(args, rep: RunReport) -> int:
    arena = _load_arena(rep, args.arena)
    if args.strategy:
        strategy = _load_strategy(rep, args.strategy, arena)
        text = play_graph_dot(build_play_graph(arena, strategy, _node_set(arena, args.from_)))
    else:
        text = export_dot(arena)
    rep.results = {"lines": text.count("\n")}
    if args.out:
        _write(args.out, text)
        rep.results["out"] = args.out
        rep.say(f"wrote {args.out}")
    elif not rep.quiet:
        sys.stdout.write(text)
    else:
        rep.results["dot"] = text
    return 0


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chromem", description="Chromatic memory for edge-colored arenas.")
    p.add_argument("--json", action="store_true", help="print a machine-readable run report")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check an arena file")
    s.add_argument("arena")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("transform", help="turn a strategy into a chromatic one")
    s.add_argument("arena")
    s.add_argument("strategy")
    s.add_argument("--from", dest="from_", metavar="U", help="comma-separated start nodes (default: all)")
    s.add_argument("--mode", choices=("winning", "preference"), default="winning")
    s.add_argument("--preorder", help="preorder file (preference mode)")
    s.add_argument("--out", help="where to write the chromatic strategy")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("verify", help="check trace inclusion of two strategies")
    s.add_argument("arena")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--from", dest="from_", metavar="U", help="start nodes of the left side (default: all)")
    s.add_argument("--right-from", metavar="V", help="start nodes of the right side (default: same as --from)")
    s.set_defaults(func=cmd_verify)

    lb = sub.add_parser("lowerbound", help="the lower-bound family A(n, q)")
    lbs = lb.add_subparsers(dest="lbcommand", required=True)
    s = lbs.add_parser("gen", help="write the arena and counting strategy")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-q", type=int, required=True)
    s.add_argument("--out-dir", default=".")
    s.set_defaults(func=cmd_lb_gen)
    s = lbs.add_parser("words", help="evaluate g, f and distinguishing words")
    s.add_argument("--kappa", help="comma-separated kappa; prints g(kappa)")
    s.add_argument("--k1")
    s.add_argument("--k2")
    s.add_argument("--f", metavar="WORD", help="word over x,y; prints f(WORD)")
    s.add_argument("-n", type=int)
    s.add_argument("-q", type=int)
    s.set_defaults(func=cmd_lb_words)
    s = lbs.add_parser("separate", help="check that a chromatic memory separates all z g(kappa)")
    s.add_argument("--strategy", required=True)
    s.add_argument("--arena", help="arena file (default: generated A(n, q))")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-q", type=int, required=True)
    s.set_defaults(func=cmd_lb_separate)

    s = sub.add_parser("search", help="smallest memory matching a reference strategy")
    s.add_argument("arena")
    s.add_argument("reference")
    s.add_argument("--from", dest="from_", metavar="U", help="start nodes (default: all)")
    s.add_argument("--max-states", type=int, default=4)
    s.add_argument("--max-candidates", type=int, default=None, help="per-level cap")
    s.add_argument("--general", action="store_true", help="search general (edge-reading) memory")
    s.add_argument("--method", choices=("enumerate", "pruned"), default="enumerate")
    s.add_argument("--out", help="where to write the witness strategy")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("simulate", help="play against a seeded uniform adversary")
    s.add_argument("arena")
    s.add_argument("strategy")
    s.add_argument("--from", dest="from_", metavar="v", required=True)
    s.add_argument("--steps", type=int, default=20)
    s.add_argument("--seed", dest="sim_seed", type=int, default=None)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("dot", help="Graphviz export of an arena or a play graph")
    s.add_argument("arena")
    s.add_argument("--strategy", help="draw the play graph of this strategy instead")
    s.add_argument("--from", dest="from_", metavar="U")
    s.add_argument("--out")
    s.set_defaults(func=cmd_dot)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "search" and args.max_states < 1:
        print("chromem: error: --max-states must be at least 1", file=sys.stderr)
        return 2
    rep = RunReport(argv, quiet=args.json)
    try:
        code = args.func(args, rep)
    except (UsageError, ValueError, OSError) as exc:
        msg = str(exc)
        if isinstance(exc, ArenaError):
            msg = "; ".join(exc.violations)
        print(f"chromem: error: {msg}", file=sys.stderr)
        rep.results = {"error": msg}
        code = 2
    except MacroStateLimitError as exc:
        print(f"chromem: error: {exc}", file=sys.stderr)
        rep.results = {"error": str(exc)}
        code = 1
    rep.exit_code = code
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
