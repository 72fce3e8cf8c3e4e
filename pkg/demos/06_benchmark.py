"""
Benchmark harness: relative error and runtime across solvers
============================================================

Runs a grid of (n, distribution, game, solver) cells, writes one CSV row
per run plus an aggregated summary file, and prints the summary.  The
relative error Er = |v_exact - v_approx| / v_exact is flagged undefined
when the exact optimum is (numerically) zero.
"""

import csv
from pathlib import Path

import coalcut as cc


def main():
    out = Path("bench_demo.csv")
    rows = cc.run_bench(
        ns=[6, 8],
        games_per_n=5,
        distributions=["uniform", "normal"],
        solvers=["exact", "quacs-classical", "quacs-qaoa"],
        ps=[1],
        seed=0,
        out_path=out,
    )
    print(f"wrote {len(rows)} rows to {out}")

    with open(f"{out}.summary.csv") as f:
        for row in csv.DictReader(f):
            print(f"  n={row['n']} {row['distribution']:>7s} "
                  f"{row['solver']:>15s}: mean Er {row['mean_er']:>10s}  "
                  f"mean time {row['mean_time_s']} s")


if __name__ == "__main__":
    main()
