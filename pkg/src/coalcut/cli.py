"""Command-line interface: generate games, solve them, sweep benchmarks.

Exit codes: 0 on success, 2 on validation/input problems, 3 on solver
failures.  Failures print a structured JSON object to stdout so callers can
parse errors the same way they parse results.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .bench import BenchRow, make_distribution, run_bench, run_solver
from .errors import SolverError, ValidationError
from .game import GameSpec, game_to_json, generate_game, load_game


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coalcut",
        description="Coalition structure search on induced subgraph games "
                    "via recursive min-cut bipartition.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a random game file")
    gen.add_argument("--n", type=int, required=True, help="agent count (1-24)")
    gen.add_argument("--distribution", choices=["uniform", "normal"], default="uniform")
    gen.add_argument("--low", type=float, default=-1.0, help="uniform lower bound")
    gen.add_argument("--high", type=float, default=1.0, help="uniform upper bound")
    gen.add_argument("--mean", type=float, default=0.0, help="normal mean")
    gen.add_argument("--stddev", type=float, default=1.0, help="normal stddev")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="output path (stdout when omitted)")

    solve = sub.add_parser("solve", help="solve a game file")
    solve.add_argument("game", help="path to a game JSON file")
    solve.add_argument("--solver", choices=["exact", "quacs-classical", "quacs-qaoa"],
                       default="exact")
    solve.add_argument("--p", type=int, default=1, help="QAOA layer count")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--shots", type=int, default=1024)
    solve.add_argument("--strict", action="store_true",
                       help="accept only strictly improving splits")
    solve.add_argument("--format", choices=["json", "csv"], default="json")

    bench = sub.add_parser("bench", help="run a benchmark sweep to CSV")
    bench.add_argument("--n-min", type=int, default=4)
    bench.add_argument("--n-max", type=int, default=10)
    bench.add_argument("--games", type=int, default=10, help="games per (n, distribution)")
    bench.add_argument("--distributions", default="uniform,normal",
                       help="comma-separated subset of: uniform, normal")
    bench.add_argument("--solvers", default="exact,quacs-classical",
                       help="comma-separated subset of: exact, quacs-classical, quacs-qaoa")
    bench.add_argument("--p-list", default="1", help="comma-separated QAOA layer counts")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--shots", type=int, default=1024)
    bench.add_argument("--exact-cap", type=int, default=18,
                       help="skip the exact solver above this n")
    bench.add_argument("--out", required=True, help="CSV output path")
    return parser


def _cmd_generate(args) -> int:
    if args.distribution == "uniform":
        dist = make_distribution("uniform", low=args.low, high=args.high)
    else:
        dist = make_distribution("normal", mean=args.mean, stddev=args.stddev)
    game = generate_game(GameSpec(args.n, dist, args.seed))
    text = game_to_json(game) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_solve(args) -> int:
    game = load_game(args.game)
    value, cs, run, secs = run_solver(game, args.solver, p=args.p, seed=args.seed,
                                      shots=args.shots, strict=args.strict)
    if args.format == "csv":
        dist = game.distribution.to_json()["name"] if game.distribution else ""
        er, defined = (0.0, True) if args.solver == "exact" else (math.nan, False)
        row = BenchRow(game.n, dist, args.seed, args.solver,
                       args.p if args.solver == "quacs-qaoa" else None,
                       value, er, secs, defined)
        print(",".join(str(c) for c in row.as_csv()))
        return 0
    report = {
        "solver": args.solver,
        "n": game.n,
        "seed": args.seed,
        "value": value,
        "partition": cs.member_lists(base=1),
        "time_s": secs,
    }
    if args.solver == "quacs-qaoa":
        report["p"] = args.p
        report["shots"] = args.shots
    if run is not None:
        trace = run.to_json()
        report["oracle_calls"] = trace["oracle_calls"]
        report["history"] = trace["steps"]
    print(json.dumps(report, indent=2))
    return 0


def _cmd_bench(args) -> int:
    ns = range(args.n_min, args.n_max + 1)
    if args.n_min > args.n_max:
        raise ValidationError(f"empty n range [{args.n_min}, {args.n_max}]")
    distributions = [d.strip() for d in args.distributions.split(",") if d.strip()]
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    ps = [int(p) for p in args.p_list.split(",") if p.strip()]
    rows = run_bench(ns, args.games, distributions, solvers, ps, args.seed,
                     args.out, exact_cap=args.exact_cap, shots=args.shots)
    print(f"wrote {len(rows)} rows to {args.out} "
          f"(+ {args.out}.summary.csv)", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"generate": _cmd_generate, "solve": _cmd_solve, "bench": _cmd_bench}
    try:
        return handlers[args.command](args)
    except ValidationError as exc:
        print(json.dumps({"error": {"type": "validation", "message": str(exc)}}))
        return 2
    except OSError as exc:
        print(json.dumps({"error": {"type": "validation", "message": str(exc)}}))
        return 2
    except SolverError as exc:
        print(json.dumps({"error": {"type": "solver", "message": str(exc)}}))
        return 3
    except KeyboardInterrupt:
        print("interrupted; partial results flushed", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
