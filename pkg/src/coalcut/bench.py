"""Benchmark harness: seeded game sweeps, timings, approximation error.

One CSV row per (game, solver) cell.  The error column compares a solver's
structure value against the exact optimum of the same game:

    er = |v_exact - v_solver| / v_exact

which is well defined because the all-singletons structure pins the optimum
at >= 0; the one remaining case, v_exact == 0, is emitted as ``er=nan`` with
the ``er_defined`` flag cleared and is excluded from aggregates.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass

from .driver import make_oracle, quacs_solve
from .errors import ValidationError
from .exact import dp_optimal_cs
from .game import VALUE_ATOL, GameSpec, ISGame, Normal, Uniform, generate_game
from .qaoa import QaoaConfig
from .qubo import AnnealConfig

CSV_COLUMNS = ["n", "distribution", "seed", "solver", "p", "value", "er", "time_s", "er_defined"]
SOLVERS = ("exact", "quacs-classical", "quacs-qaoa")
DEFAULT_EXACT_CAP = 18


@dataclass(frozen=True)
class BenchRow:
    """One benchmark cell, mirroring the CSV schema."""

    n: int
    distribution: str
    seed: int
    solver: str
    p: int | None
    value: float
    er: float
    time_s: float
    er_defined: bool

    def as_csv(self) -> list:
        return [self.n, self.distribution, self.seed, self.solver,
                "" if self.p is None else self.p,
                repr(self.value),
                "nan" if math.isnan(self.er) else repr(self.er),
                f"{self.time_s:.6f}", str(self.er_defined).lower()]


def make_distribution(name: str, **kwargs):
    """Distribution object from its CLI name."""
    key = name.lower()
    if key == "uniform":
        return Uniform(kwargs.get("low", -1.0), kwargs.get("high", 1.0))
    if key == "normal":
        return Normal(kwargs.get("mean", 0.0), kwargs.get("stddev", 1.0))
    raise ValidationError(f"unknown distribution {name!r} (expected uniform or normal)")


def approx_error(exact_value: float, approx_value: float) -> tuple[float, bool]:
    """Relative shortfall against the exact optimum; (nan, False) when the
    optimum is zero and the ratio is undefined."""
    if abs(exact_value) <= VALUE_ATOL:
        return math.nan, False
    return abs(exact_value - approx_value) / exact_value, True


def run_solver(game: ISGame, solver: str, p: int = 1, seed: int = 0,
               shots: int = 1024, strict: bool = False):
    """Run one solver on one game; returns (value, structure, run, seconds)
    where ``run`` is the anytime trace (None for the exact solver).  Timing
    wraps the solver call only."""
    if solver == "exact":
        start = time.perf_counter()
        cs = dp_optimal_cs(game)
        return cs.value, cs, None, time.perf_counter() - start
    if solver == "quacs-classical":
        oracle = make_oracle("qubo-classical", anneal=AnnealConfig(seed=seed))
    elif solver == "quacs-qaoa":
        oracle = make_oracle("qaoa", p=p, qaoa=QaoaConfig(shots=shots, seed=seed))
    else:
        raise ValidationError(f"unknown solver {solver!r} (expected one of {', '.join(SOLVERS)})")
    start = time.perf_counter()
    run = quacs_solve(game, oracle, strict=strict)
    return run.final.value, run.final, run, time.perf_counter() - start


def row_seed(base: int, n: int, dist_index: int, game_index: int) -> int:
    """Readable, collision-free per-cell seed: the game and every solver on
    it share this seed, so any row can be replayed from its columns."""
    return ((base * 100 + n) * 1000 + game_index) * 10 + dist_index


def run_bench(ns, games_per_n: int, distributions, solvers, ps, seed: int,
              out_path, exact_cap: int = DEFAULT_EXACT_CAP, shots: int = 1024,
              progress=None) -> list[BenchRow]:
    """Sweep the (n, distribution, game, solver) grid and stream rows to CSV.

    Rows are flushed as they are produced, so an interrupted run leaves a
    valid partial file; aggregates (mean/max error and mean time per cell
    group) land next to it in ``<out>.summary.csv``.  The exact solver is
    skipped above ``exact_cap``, which also suspends the error columns of
    approximate rows for those n.
    """
    ns = sorted(set(int(n) for n in ns))
    ps = [int(p) for p in ps] or [1]
    dist_names = list(distributions)
    unknown = [s for s in solvers if s not in SOLVERS]
    if unknown:
        raise ValidationError(f"unknown solver {unknown[0]!r} (expected one of {', '.join(SOLVERS)})")
    rows: list[BenchRow] = []
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        try:
            for n in ns:
                for d, dist_name in enumerate(dist_names):
                    for g in range(games_per_n):
                        cell_seed = row_seed(seed, n, d, g)
                        game = generate_game(GameSpec(n, make_distribution(dist_name), cell_seed))
                        exact_value = None
                        cells = []
                        if "exact" in solvers and n <= exact_cap:
                            cells.append(("exact", None))
                        for solver in solvers:
                            if solver == "exact":
                                continue
                            for p in (ps if solver == "quacs-qaoa" else [None]):
                                cells.append((solver, p))
                        for solver, p in cells:
                            value, _, _, secs = run_solver(
                                game, solver, p=p or 1, seed=cell_seed, shots=shots)
                            if solver == "exact":
                                exact_value = value
                                er, defined = 0.0, True
                            elif exact_value is not None:
                                er, defined = approx_error(exact_value, value)
                            else:
                                er, defined = math.nan, False
                            row = BenchRow(n, dist_name, cell_seed, solver, p,
                                           value, er, secs, defined)
                            rows.append(row)
                            writer.writerow(row.as_csv())
                            fh.flush()
                            if progress:
                                progress(row)
        except KeyboardInterrupt:
            fh.flush()
            write_summary(rows, str(out_path) + ".summary.csv")
            raise
    write_summary(rows, str(out_path) + ".summary.csv")
    return rows


def write_summary(rows, out_path) -> None:
    """Aggregate mean/max error (defined rows only) and mean time per
    (n, distribution, solver, p) group."""
    groups: dict[tuple, list[BenchRow]] = {}
    for row in rows:
        groups.setdefault((row.n, row.distribution, row.solver, row.p), []).append(row)
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "distribution", "solver", "p", "games",
                         "mean_er", "max_er", "mean_time_s", "er_rows"])
        for (n, dist, solver, p), cell in sorted(
                groups.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2], kv[0][3] or 0)):
            ers = [r.er for r in cell if r.er_defined]
            mean_er = sum(ers) / len(ers) if ers else math.nan
            max_er = max(ers) if ers else math.nan
            mean_t = sum(r.time_s for r in cell) / len(cell)
            writer.writerow([n, dist, solver, "" if p is None else p, len(cell),
                             "nan" if math.isnan(mean_er) else repr(mean_er),
                             "nan" if math.isnan(max_er) else repr(max_er),
                             f"{mean_t:.6f}", len(ers)])
