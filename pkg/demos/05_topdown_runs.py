"""
Anytime top-down structure search with pluggable split oracles
==============================================================

Starting from the grand coalition, each queued coalition is split by an
oracle; the bipartition replaces its parent when it does not lose value,
otherwise the parent is settled.  Intermediate states are always valid
structures, values never decrease, and at most 2n - 1 oracle calls are
made.  Oracles: exhaustive scan, classical QUBO (exhaustive or
annealing), and the QAOA simulator.
"""

import json

import coalcut as cc


def narrate(run, game):
    print(f"oracle={run.oracle_name}: {run.oracle_calls} calls, "
          f"final value {run.final.value}")
    for step in run.history:
        verdict = "accept" if step.accepted else "reject"
        print(f"  [{step.index}] {cc.mask_members(step.coalition)} -> "
              f"{cc.mask_members(step.left)} | {cc.mask_members(step.right)} "
              f"combined {step.combined_value:+.4f} vs {step.parent_value:+.4f} "
              f"=> {verdict} (running value {step.snapshot_value:+.4f})")


def main():
    game = cc.sample_game()
    for kind, kwargs in (("exhaustive", {}),
                         ("quacs-classical", {"seed": 0}),
                         ("quacs-qaoa", {"p": 1, "seed": 0})):
        run = cc.quacs_solve(game, cc.make_oracle(kind, **kwargs))
        narrate(run, game)
        print()

    # the greedy top-down search is not always optimal: on this 8-agent
    # game it stops short of the DP optimum
    g8 = cc.generate_game(cc.GameSpec(8, cc.Uniform(), seed=1))
    greedy = cc.quacs_solve(g8, cc.make_oracle("exhaustive"))
    exact = cc.dp_optimal_cs(g8)
    print(f"n=8 greedy {greedy.final.value:.6f} vs exact {exact.value:.6f} "
          f"(gap {exact.value - greedy.final.value:.6f})")

    # full trace as JSON, ready for logging
    doc = greedy.to_json()
    print(json.dumps({k: doc[k] for k in ("oracle", "oracle_calls", "value")},
                     indent=2))


if __name__ == "__main__":
    main()
