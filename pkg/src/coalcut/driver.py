"""Anytime top-down coalition structure search by recursive bipartition.

Starting from the grand coalition, each queued coalition is handed to a
pluggable split oracle; the proposed bipartition replaces its parent when
v(C) + v(C-bar) >= v(S) (up to tolerance), otherwise the parent is settled
for good.  Every intermediate state is a valid structure whose value never
decreases, and a run makes at most 2n - 1 oracle calls.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field, replace

from .errors import CoalcutError, OracleError, ValidationError
from .exact import SplitResult, best_split_bruteforce
from .game import (
    VALUE_ATOL,
    CoalitionStructure,
    ISGame,
    coalition_value,
    cs_value,
    full_mask,
    lowest_set_bit,
    mask_members,
    mask_size,
)
from .qaoa import (
    QaoaConfig,
    circuit_report,
    coupling_scale,
    expectation,
    optimize_params,
    run_qaoa,
    sample_and_select,
)
from .qubo import (
    EXHAUSTIVE_CAP,
    AnnealConfig,
    build_mincut_qubo,
    energy_table,
    qubo_to_ising,
    solve_qubo_annealing,
    solve_qubo_exhaustive,
)


@dataclass
class OracleStats:
    """Per-call record a split oracle leaves behind."""

    coalition: int
    m: int
    qubits: int
    time_s: float
    method: str
    details: dict = field(default_factory=dict)


class SplitOracle:
    """Interface of the inner bipartition solver.

    Subclasses implement ``_split(game, s)`` for coalitions of size >= 3 and
    may report extra per-call detail; coalitions of size 2 have a unique
    proper bipartition, so every oracle short-circuits them without any
    solver machinery.  Each call appends an :class:`OracleStats` record.
    """

    name = "abstract"

    def __init__(self):
        self.stats: list[OracleStats] = []

    def propose_split(self, game: ISGame, s: int) -> SplitResult:
        m = mask_size(s)
        if m < 2:
            raise ValidationError(f"cannot split a coalition of size {m}")
        start = time.perf_counter()
        if m == 2:
            low = lowest_set_bit(s)
            result = self._finish(game, s, low, s ^ low)
            method, details = "short-circuit", {}
        else:
            result, method, details = self._split(game, s)
        self.stats.append(OracleStats(
            coalition=s, m=m, qubits=self._qubits(m), time_s=time.perf_counter() - start,
            method=method, details=details))
        return result

    def _qubits(self, m: int) -> int:
        """Register size the step requires; zero for classical oracles."""
        return 0

    @staticmethod
    def _finish(game: ISGame, s: int, left: int, right: int) -> SplitResult:
        """Package halves with canonically recomputed values so that every
        oracle reports bit-identical numbers for the same split."""
        if not (left & lowest_set_bit(s)):
            left, right = right, left
        combined = coalition_value(game, left) + coalition_value(game, right)
        improved = combined >= coalition_value(game, s) - VALUE_ATOL
        return SplitResult(left, right, combined, improved)

    def _split(self, game: ISGame, s: int) -> tuple[SplitResult, str, dict]:
        raise NotImplementedError


class ExhaustiveSplitOracle(SplitOracle):
    """Optimal bipartitions by scanning all 2^(m-1) - 1 candidates."""

    name = "exhaustive"

    def _split(self, game, s):
        res = best_split_bruteforce(game, s)
        return self._finish(game, s, res.left, res.right), "bruteforce", {}


class QuboClassicalOracle(SplitOracle):
    """Min-cut QUBO solved classically: exhaustively up to the crossover
    size, by simulated annealing beyond it."""

    name = "qubo-classical"

    def __init__(self, crossover: int = 20, anneal: AnnealConfig | None = None):
        super().__init__()
        if not 2 <= crossover <= EXHAUSTIVE_CAP:
            raise ValidationError(f"crossover must be in [2, {EXHAUSTIVE_CAP}], got {crossover}")
        self.crossover = crossover
        self.anneal = anneal or AnnealConfig()

    def _split(self, game, s):
        qubo = build_mincut_qubo(game, s)
        if qubo.m <= self.crossover:
            sol = solve_qubo_exhaustive(qubo)
            method = "qubo-exhaustive"
        else:
            sol = solve_qubo_annealing(qubo, self.anneal)
            method = "qubo-annealing"
        zeros, ones = qubo.decode(sol.x)
        return (self._finish(game, s, zeros, ones), method,
                {"cut": sol.value})


class QaoaSplitOracle(SplitOracle):
    """Min-cut QUBO in Ising form, solved by the QAOA simulator: optimize
    angles, evolve, sample, keep the best measured cut."""

    name = "qaoa"

    def __init__(self, p: int = 1, config: QaoaConfig | None = None):
        super().__init__()
        if p < 1:
            raise ValidationError(f"layer count must be >= 1, got {p}")
        self.p = p
        self.config = config or QaoaConfig()

    def _qubits(self, m: int) -> int:
        # the register a step needs is one qubit per member, even when the
        # two-agent short circuit skips building the circuit
        return m

    def _split(self, game, s):
        qubo = build_mincut_qubo(game, s)
        ising = qubo_to_ising(qubo)
        energies = energy_table(ising)
        params = optimize_params(ising, self.p, self.config)
        sv = run_qaoa(ising, params, energies)
        sol = sample_and_select(sv, ising, self.config.shots, self.config.seed)
        zeros, ones = qubo.decode(sol.x)
        report = circuit_report(ising, self.p)
        details = {
            "cut": sol.value,
            "expectation": expectation(sv, ising, energies),
            "gammas": list(params.gammas),
            "betas": list(params.betas),
            "j_scale": coupling_scale(ising),
            "gates": {"hadamard": report.hadamard_count, "cnot": report.cnot_count,
                      "rz": report.rz_count, "rx": report.rx_count, "total": report.total},
        }
        return self._finish(game, s, zeros, ones), "qaoa", details


def make_oracle(kind: str, *, p: int = 1, qaoa: QaoaConfig | None = None,
                crossover: int = 20, anneal: AnnealConfig | None = None,
                seed: int | None = None) -> SplitOracle:
    """Build a split oracle by name: ``exhaustive``, ``qubo-classical``
    (accepted alias ``quacs-classical``), or ``qaoa`` (alias ``quacs-qaoa``).

    ``seed``, when given, overrides the seed inside the relevant config.
    """
    key = kind.lower()
    if key == "exhaustive":
        return ExhaustiveSplitOracle()
    if key in ("qubo-classical", "quacs-classical"):
        cfg = anneal or AnnealConfig()
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        return QuboClassicalOracle(crossover=crossover, anneal=cfg)
    if key in ("qaoa", "quacs-qaoa"):
        cfg = qaoa or QaoaConfig()
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        return QaoaSplitOracle(p=p, config=cfg)
    raise ValidationError(f"unknown oracle kind {kind!r}")


@dataclass(frozen=True)
class QuacsStep:
    """One examined coalition: the proposal, the verdict, and the running
    structure value after the verdict."""

    index: int
    coalition: int
    accepted: bool
    left: int
    right: int
    combined_value: float
    parent_value: float
    snapshot_value: float
    time_s: float


@dataclass
class QuacsRun:
    """Complete trace of a top-down run."""

    final: CoalitionStructure
    history: list[QuacsStep]
    oracle_name: str

    @property
    def oracle_calls(self) -> int:
        return len(self.history)

    @property
    def wall_times(self) -> list[float]:
        return [step.time_s for step in self.history]

    def to_json(self) -> dict:
        return {
            "oracle": self.oracle_name,
            "oracle_calls": self.oracle_calls,
            "value": self.final.value,
            "coalitions": [mask_members(m) for m in self.final.coalitions],
            "coalition_masks": list(self.final.coalitions),
            "steps": [
                {
                    "index": s.index,
                    "coalition": s.coalition,
                    "accepted": s.accepted,
                    "left": s.left,
                    "right": s.right,
                    "combined_value": s.combined_value,
                    "parent_value": s.parent_value,
                    "snapshot_value": s.snapshot_value,
                    "time_s": s.time_s,
                }
                for s in self.history
            ],
        }


def quacs_solve(game: ISGame, oracle: SplitOracle, strict: bool = False,
                tol: float = VALUE_ATOL) -> QuacsRun:
    """Recursively bipartition the grand coalition until nothing improves.

    Coalitions wait in a FIFO queue; a proposed split is accepted when
    v(C) + v(C-bar) >= v(S) - tol (or strictly exceeds v(S) + tol when
    ``strict``, which avoids splitting zero-synergy pairs).  Rejected
    coalitions are settled permanently and singletons are never queued, so
    at most 2n - 1 proposals are ever requested.  If the oracle fails, the
    raised error carries the last valid structure.
    """
    queue: deque[int] = deque([full_mask(game.n)])
    settled: list[int] = []
    history: list[QuacsStep] = []
    while queue:
        s = queue.popleft()
        if mask_size(s) < 2:
            settled.append(s)
            continue
        start = time.perf_counter()
        try:
            res = oracle.propose_split(game, s)
        except CoalcutError as exc:
            partial = CoalitionStructure.from_masks(game, settled + [s] + list(queue))
            raise OracleError(
                f"{oracle.name} oracle failed on coalition {mask_members(s)}: {exc}",
                partial=partial) from exc
        elapsed = time.perf_counter() - start
        parent_value = coalition_value(game, s)
        if strict:
            accepted = res.combined_value > parent_value + tol
        else:
            accepted = res.combined_value >= parent_value - tol
        if accepted:
            for side in (res.left, res.right):
                if mask_size(side) >= 2:
                    queue.append(side)
                else:
                    settled.append(side)
        else:
            settled.append(s)
        snapshot = cs_value(game, settled + list(queue))
        history.append(QuacsStep(
            index=len(history), coalition=s, accepted=accepted, left=res.left,
            right=res.right, combined_value=res.combined_value,
            parent_value=parent_value, snapshot_value=snapshot, time_s=elapsed))
    final = CoalitionStructure.from_masks(game, settled)
    return QuacsRun(final=final, history=history, oracle_name=oracle.name)
