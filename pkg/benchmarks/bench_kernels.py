"""Compare the compiled and pure-Python search kernels on exhaustive levels.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--json]
"""

import argparse
import json
import time

from chromem.fixtures import consecutive_ones_arena, consecutive_ones_strategy
from chromem.kernels import BACKENDS, FlatArena
from chromem.lowerbound import gen_arena, gen_s1
from chromem.search import reference_automaton

CASES = [
    ("fixture Q=3", lambda: (consecutive_ones_arena(), consecutive_ones_strategy()), 3),
    ("fixture Q=4", lambda: (consecutive_ones_arena(), consecutive_ones_strategy()), 4),
    ("A(1,2) Q=2", lambda: (gen_arena(1, 2), gen_s1(1, 2)), 2),
    ("A(1,3) Q=2", lambda: (gen_arena(1, 3), gen_s1(1, 3)), 2),
    ("A(2,2) Q=2", lambda: (gen_arena(2, 2), gen_s1(2, 2)), 2),
]


def run_case(build, Q, backend, repeat):
    arena, ref = build()
    starts = [arena.node("u")]
    dfa = reference_automaton(arena, ref, starts)
    args = (*FlatArena.of(arena).args(), Q, dfa.flat(), dfa.initial, starts, False, 0)
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = BACKENDS[backend].search_level(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return result, best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    rows = []
    for name, build, Q in CASES:
        row = {"case": name}
        results = {}
        for backend in sorted(BACKENDS):
            res, dt = run_case(build, Q, backend, args.repeat)
            results[backend] = res
            row[backend] = dt
            row["candidates"] = res[1]
        if len(results) == 2:
            assert results["python"] == results["compiled"], f"backends disagree on {name}"
            row["speedup"] = row["python"] / row["compiled"]
        rows.append(row)

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'case':<14} {'candidates':>11} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for r in rows:
        comp = f"{r['compiled']:.4f}" if "compiled" in r else "-"
        sp = f"{r['speedup']:.0f}x" if "speedup" in r else "-"
        print(f"{r['case']:<14} {r['candidates']:>11} {r['python']:>10.4f} {comp:>11} {sp:>8}")


if __name__ == "__main__":
    main()
