"""Min-cut QUBO encoding of the bipartition step, Ising form, and solvers.

Splitting a coalition loses exactly the weight on the crossing edges, so the
best split minimizes the cut.  That cut is a quadratic form over the binary
side-assignment vector, which this module builds as an upper-triangular QUBO
matrix, converts to Ising spins for the quantum route, and solves either
exhaustively or by simulated annealing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import ValidationError
from .game import ISGame, mask_members, mask_size, subset_values

# Above this many variables the exhaustive table no longer fits a sane
# time/memory budget; callers should switch to annealing.
EXHAUSTIVE_CAP = 24


@dataclass(frozen=True)
class QuboProblem:
    """Minimize x @ Q @ x over binary x, with Q stored upper triangular.

    ``index_map`` carries the global agent index behind each local variable,
    so solutions can be decoded back into coalition masks.
    """

    q: np.ndarray
    index_map: tuple[int, ...] = ()

    def __post_init__(self):
        q = np.array(self.q, dtype=np.float64)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValidationError(f"Q must be square, got shape {q.shape}")
        if q.shape[0] < 2:
            raise ValidationError("QUBO needs at least 2 variables")
        if np.any(np.tril(q, -1) != 0.0):
            raise ValidationError("Q must be upper triangular")
        q.flags.writeable = False
        object.__setattr__(self, "q", q)
        idx = tuple(self.index_map) or tuple(range(q.shape[0]))
        if len(idx) != q.shape[0]:
            raise ValidationError("index_map length must match Q")
        object.__setattr__(self, "index_map", idx)

    @property
    def m(self) -> int:
        return self.q.shape[0]

    def objective(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(x @ self.q @ x)

    def decode(self, x) -> tuple[int, int]:
        """Split the source coalition by x: (x=0 side, x=1 side) as masks."""
        left = right = 0
        for k, agent in enumerate(self.index_map):
            if x[k]:
                right |= 1 << agent
            else:
                left |= 1 << agent
        return left, right


@dataclass(frozen=True)
class IsingProblem:
    """Minimize sum_k h_k z_k + sum_{k<l} J_kl z_k z_l over spins z in {-1,+1}.

    ``offset`` carries the constant dropped in the QUBO substitution, so
    ``energy(z) + offset`` reproduces the QUBO objective exactly.  For
    min-cut instances every field h_k is zero.
    """

    h: np.ndarray
    j: np.ndarray
    offset: float = 0.0
    index_map: tuple[int, ...] = ()

    def __post_init__(self):
        h = np.array(self.h, dtype=np.float64)
        j = np.array(self.j, dtype=np.float64)
        if h.ndim != 1 or j.shape != (h.size, h.size):
            raise ValidationError("h must be a vector and J a matching square matrix")
        if np.any(np.tril(j, 0) != 0.0):
            raise ValidationError("J must be strictly upper triangular")
        h.flags.writeable = False
        j.flags.writeable = False
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "j", j)
        idx = tuple(self.index_map) or tuple(range(h.size))
        if len(idx) != h.size:
            raise ValidationError("index_map length must match h")
        object.__setattr__(self, "index_map", idx)

    @property
    def m(self) -> int:
        return self.h.size

    def energy(self, z) -> float:
        z = np.asarray(z, dtype=np.float64)
        return float(self.h @ z + z @ self.j @ z)

    def couplings(self) -> list[tuple[int, int, float]]:
        """Nonzero (k, l, J_kl) entries, k < l, row-major order."""
        ks, ls = np.nonzero(self.j)
        return [(int(k), int(l), float(self.j[k, l])) for k, l in zip(ks, ls)]


def build_mincut_qubo(game: ISGame, s: int) -> QuboProblem:
    """QUBO over a coalition's members whose objective at assignment x is
    the cut weight between the x=1 and x=0 sides.

    cut(x) = sum_{k<l} w_kl (x_k + x_l - 2 x_k x_l), which collects into
    diagonal terms q_kk = sum_{l != k} w_kl and off-diagonal q_kl = -2 w_kl;
    minimizing the cut maximizes v(C) + v(C-bar) = v(S) - cut.
    """
    members = mask_members(s)
    if mask_size(s) < 2:
        raise ValidationError(f"cannot build a cut problem for a coalition of size {mask_size(s)}")
    w = game.induced_weights(s)
    m = w.shape[0]
    q = -2.0 * np.triu(w, 1)
    q[np.diag_indices(m)] = w.sum(axis=1)
    return QuboProblem(q, tuple(members))


def qubo_to_ising(qubo: QuboProblem) -> IsingProblem:
    """Substitute x_k = (1 - z_k) / 2 and collect terms.

    The quadratic coefficients give J_kl = q_kl / 4; the linear terms gather
    h_k = -(q_kk/2 + sum_{l!=k} q_kl/4), which cancels to zero for min-cut
    matrices; the constant goes into ``offset`` so energy + offset equals
    the QUBO objective exactly for every assignment.
    """
    q = qubo.q
    diag = np.diagonal(q).copy()
    off = q - np.diag(diag)
    j = off / 4.0
    h = -diag / 2.0 - (off.sum(axis=0) + off.sum(axis=1)) / 4.0
    offset = float(diag.sum() / 2.0 + off.sum() / 4.0)
    h[h == 0.0] = 0.0  # normalize -0.0
    return IsingProblem(h, j, offset, qubo.index_map)


def objective_table(qubo: QuboProblem) -> np.ndarray:
    """QUBO objective for every assignment, indexed by bitmask of x.

    Built by doubling — adding variable k contributes its diagonal plus the
    pair terms against already-set bits — in O(2^m) total work.
    """
    q = qubo.q
    sym = q + q.T - np.diag(np.diagonal(q))
    table = np.zeros(1)
    for k in range(q.shape[0]):
        cross = np.zeros(1)
        for i in range(k):
            cross = np.concatenate([cross, cross + sym[i, k]])
        table = np.concatenate([table, table + cross + q[k, k]])
    return table


def energy_table(ising: IsingProblem) -> np.ndarray:
    """Ising energy for every spin assignment, indexed by bitmask.

    Bit k set means z_k = -1 (the x_k = 1 convention), so entry order
    matches :func:`objective_table` and the two agree up to the offset.
    """
    h, j = ising.h, ising.j
    table = np.zeros(1)
    for k in range(h.size):
        # qubit k's contribution with z_k = +1 is h_k + sum_{i<k} J_ik z_i;
        # with z_k = -1 it is the negative of that
        cross = np.zeros(1)
        for i in range(k):
            # z_i flips from +1 to -1 when bit i is set
            cross = np.concatenate([cross + j[i, k], cross - j[i, k]])
        add = h[k] + cross
        table = np.concatenate([table + add, table - add])
    return table


def cut_table(weights: np.ndarray) -> np.ndarray:
    """Cut weight for every bipartition mask of the given subgraph."""
    v = subset_values(np.asarray(weights, dtype=np.float64))
    full = v.size - 1
    masks = np.arange(v.size)
    return v[full] - v[masks] - v[full ^ masks]


@dataclass(frozen=True)
class QuboSolution:
    """A binary assignment with its objective value."""

    x: np.ndarray
    value: float

    @property
    def mask(self) -> int:
        return int(sum(1 << k for k in np.flatnonzero(self.x)))


def canonical_assignment(x: np.ndarray) -> np.ndarray:
    """Flip all bits if bit 0 is set; both halves of a cut cost the same."""
    x = np.asarray(x, dtype=np.int8)
    return (1 - x) if x[0] else x.copy()


def _bits(mask: int, m: int) -> np.ndarray:
    return np.array([(mask >> k) & 1 for k in range(m)], dtype=np.int8)


def solve_qubo_exhaustive(qubo: QuboProblem) -> QuboSolution:
    """Global QUBO minimum over non-trivial assignments by full table scan.

    The all-zeros and all-ones strings are excluded — they encode "no cut"
    and are never a legal split.  Ties resolve to the numerically smallest
    bitstring with bit 0 clear (the canonical cut orientation).
    """
    m = qubo.m
    if m > EXHAUSTIVE_CAP:
        raise ValidationError(f"exhaustive solve capped at {EXHAUSTIVE_CAP} variables, got {m}")
    table = objective_table(qubo)
    vals = table[1:-1]  # drop all-zeros (index 0) and all-ones (last)
    lo = vals.min()
    ties = np.flatnonzero(vals == lo) + 1
    even = ties[(ties & 1) == 0]
    best = int(even[0]) if even.size else int(ties[0])
    return QuboSolution(_bits(best, m), float(table[best]))


@dataclass(frozen=True)
class AnnealConfig:
    """Simulated annealing knobs: geometric temperature ladder scaled off
    max|Q|, Metropolis single-flip sweeps, independent seeded restarts."""

    sweeps_per_temp: int = 100
    n_temps: int = 30
    hot: float = 1.0
    cold: float = 1e-3
    restarts: int = 20
    seed: int = 0

    def __post_init__(self):
        if min(self.sweeps_per_temp, self.n_temps, self.restarts) < 1:
            raise ValidationError("annealing parameters must be positive")
        if not 0.0 < self.cold < self.hot:
            raise ValidationError("temperature ladder must descend: need 0 < cold < hot")


@numba.njit(cache=True)
def _anneal_once(qsym, diag, x, temps, sweeps, uniforms, best_x):
    """Metropolis single-spin-flip annealing; mutates x in place.

    qsym is Q + Q^T with a zeroed diagonal, so flipping bit k changes the
    objective by delta = (1 - 2 x_k) * (diag_k + qsym[k] @ x).  Tracks the
    best non-trivial assignment visited (written into best_x); returns its
    value, or +inf if every visited state was trivial.
    """
    m = x.size
    val = 0.0
    ones = 0
    for k in range(m):
        if x[k]:
            ones += 1
            val += diag[k]
            for l in range(k):
                if x[l]:
                    val += qsym[k, l]
    best_val = np.inf
    if 0 < ones < m:
        best_val = val
        for k in range(m):
            best_x[k] = x[k]
    u = 0
    for t in range(temps.size):
        temp = temps[t]
        for _ in range(sweeps):
            for k in range(m):
                dot = 0.0
                for l in range(m):
                    if x[l]:
                        dot += qsym[k, l]
                delta = (1.0 - 2.0 * x[k]) * (diag[k] + dot)
                if delta <= 0.0 or uniforms[u] < np.exp(-delta / temp):
                    ones += 1 - 2 * x[k]
                    x[k] = 1 - x[k]
                    val += delta
                    if 0 < ones < m and val < best_val:
                        best_val = val
                        for i in range(m):
                            best_x[i] = x[i]
                u += 1
    return best_val


def solve_qubo_annealing(qubo: QuboProblem, config: AnnealConfig | None = None) -> QuboSolution:
    """Simulated annealing for the QUBO, keeping the best non-trivial
    assignment visited across restarts.

    Deterministic for a fixed config seed: restart r draws its start point
    and acceptance randomness from ``default_rng([seed, r])``.  The result
    is canonicalized to bit 0 clear; in the (practically unreachable) event
    that no restart ever visits a non-trivial state, the cheapest
    single-variable cut is returned instead.
    """
    if config is None:
        config = AnnealConfig()
    q = qubo.q
    m = qubo.m
    diag = np.diagonal(q).copy()
    qsym = q + q.T - 2.0 * np.diag(diag)
    scale = float(np.abs(q).max())
    if scale == 0.0:
        scale = 1.0
    temps = np.geomspace(config.hot * scale, config.cold * scale, config.n_temps)
    pool: list[np.ndarray] = []
    for r in range(config.restarts):
        rng = np.random.default_rng([config.seed, r])
        x = rng.integers(0, 2, m).astype(np.int8)
        uniforms = rng.random(config.n_temps * config.sweeps_per_temp * m)
        best_x = np.zeros(m, dtype=np.int8)
        best_val = _anneal_once(qsym, diag, x, temps, config.sweeps_per_temp, uniforms, best_x)
        if np.isfinite(best_val):
            pool.append(canonical_assignment(best_x))
    if not pool:
        # every walk stayed on all-0/all-1: offer the m single-agent cuts
        for k in range(1, m):
            x = np.zeros(m, dtype=np.int8)
            x[k] = 1
            pool.append(x)
        x = np.ones(m, dtype=np.int8)
        x[0] = 0
        pool.append(x)
    vals = [qubo.objective(x) for x in pool]
    best = int(np.argmin(vals))
    return QuboSolution(pool[best], vals[best])
