"""Induced subgraph games: model, coalition arithmetic, generation, JSON I/O.

A game is a set of ``n`` agents plus a symmetric ``n x n`` weight matrix with
zero diagonal; ``weights[i, j]`` is the synergy between agents ``i`` and ``j``.
A coalition is a bitmask over agent indices (bit ``i`` set means agent ``i``
is a member), so set arithmetic is plain integer bit arithmetic.  The value
of a coalition is the sum of the edge weights inside it; singletons and the
empty set are worth zero.
"""

from __future__ import annotations

import importlib.resources
import json
from dataclasses import dataclass

import numpy as np

from .errors import GameFormatError, ValidationError

# Statevector simulation needs 2^n amplitudes, so the agent count is capped.
MAX_AGENTS = 24

# Absolute tolerance for value comparisons throughout the package.
VALUE_ATOL = 1e-9


# ---------------------------------------------------------------------------
# coalition bitmask helpers
# ---------------------------------------------------------------------------

def full_mask(n: int) -> int:
    """Mask of the coalition containing all ``n`` agents."""
    return (1 << n) - 1


def mask_size(mask: int) -> int:
    """Number of agents in the coalition."""
    return mask.bit_count()


def mask_members(mask: int) -> list[int]:
    """Sorted agent indices in the coalition."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_from_members(members) -> int:
    """Bitmask of an iterable of agent indices."""
    m = 0
    for i in members:
        m |= 1 << i
    return m


def lowest_set_bit(mask: int) -> int:
    """The mask's lowest set bit, as a one-bit mask."""
    return mask & -mask


# ---------------------------------------------------------------------------
# weight distributions and generator configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Uniform:
    """Uniform edge-weight distribution on [low, high)."""

    low: float = -1.0
    high: float = 1.0

    def __post_init__(self):
        if not self.low < self.high:
            raise ValidationError(f"uniform bounds need low < high, got [{self.low}, {self.high})")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.low, self.high, size)

    def to_json(self) -> dict:
        return {"name": "uniform", "low": self.low, "high": self.high}


@dataclass(frozen=True)
class Normal:
    """Normal edge-weight distribution with the given mean and stddev."""

    mean: float = 0.0
    stddev: float = 1.0

    def __post_init__(self):
        if not self.stddev > 0:
            raise ValidationError(f"normal stddev must be positive, got {self.stddev}")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.normal(self.mean, self.stddev, size)

    def to_json(self) -> dict:
        return {"name": "normal", "mean": self.mean, "stddev": self.stddev}


def distribution_from_json(obj: dict):
    try:
        name = obj["name"]
    except (TypeError, KeyError):
        raise GameFormatError("distribution: missing 'name'") from None
    if name == "uniform":
        return Uniform(float(obj.get("low", -1.0)), float(obj.get("high", 1.0)))
    if name == "normal":
        return Normal(float(obj.get("mean", 0.0)), float(obj.get("stddev", 1.0)))
    raise GameFormatError(f"distribution: unknown name {name!r}")


@dataclass(frozen=True)
class GameSpec:
    """Configuration for :func:`generate_game`."""

    n: int
    distribution: Uniform | Normal = Uniform()
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_AGENTS:
            raise ValidationError(f"n must be in [1, {MAX_AGENTS}], got {self.n}")


# ---------------------------------------------------------------------------
# the game
# ---------------------------------------------------------------------------

class ISGame:
    """An induced subgraph game: ``n`` agents and a symmetric weight matrix.

    The matrix must be exactly symmetric with a zero diagonal (agents have no
    self-synergy).  Instances are immutable; the weight array is marked
    read-only at construction.
    """

    def __init__(self, weights, seed: int | None = None,
                 distribution: Uniform | Normal | None = None):
        w = np.array(weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValidationError(f"weights must be a square matrix, got shape {w.shape}")
        n = w.shape[0]
        if not 1 <= n <= MAX_AGENTS:
            raise ValidationError(f"n must be in [1, {MAX_AGENTS}], got {n}")
        if not np.all(np.isfinite(w)):
            raise ValidationError("weights must be finite")
        if np.any(np.diagonal(w) != 0.0):
            k = int(np.flatnonzero(np.diagonal(w))[0])
            raise ValidationError(f"weights[{k}][{k}] must be 0 (no self-synergy)")
        if not np.array_equal(w, w.T):
            i, j = np.argwhere(w != w.T)[0]
            raise ValidationError(f"weights[{i}][{j}] != weights[{j}][{i}] (matrix must be symmetric)")
        w.flags.writeable = False
        self.weights = w
        self.n = n
        self.seed = seed
        self.distribution = distribution

    def __eq__(self, other):
        if not isinstance(other, ISGame):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.weights, other.weights)

    def __repr__(self):
        return f"ISGame(n={self.n})"

    def induced_weights(self, mask: int) -> np.ndarray:
        """Weight matrix of the subgraph induced by a coalition."""
        idx = mask_members(mask)
        return self.weights[np.ix_(idx, idx)]


def coalition_value(game: ISGame, mask: int) -> float:
    """Sum of edge weights inside the coalition (each unordered pair once)."""
    if not 0 <= mask < (1 << game.n):
        raise ValidationError(f"coalition mask {mask} out of range for n={game.n}")
    members = mask_members(mask)
    if len(members) <= 1:
        return 0.0
    sub = game.weights[np.ix_(members, members)]
    return float(np.triu(sub, 1).sum())


def cs_value(game: ISGame, coalitions) -> float:
    """Total value of a coalition structure (must be disjoint and complete).

    Accepts a :class:`CoalitionStructure` or any iterable of coalition masks.
    """
    masks = [int(c) for c in coalitions]
    seen = 0
    for m in masks:
        if m == 0:
            raise ValidationError("coalition structures may not contain the empty coalition")
        if seen & m:
            raise ValidationError("coalitions overlap")
        seen |= m
    if seen != full_mask(game.n):
        raise ValidationError("coalition structure does not cover all agents")
    return float(sum(coalition_value(game, m) for m in masks))


def subset_values(weights: np.ndarray) -> np.ndarray:
    """Coalition values for every subset of the given weight matrix.

    Returns an array of length ``2^m`` indexed by bitmask; entry ``S`` is the
    sum of ``weights[i, j]`` over pairs ``i < j`` inside ``S``.  Built by
    doubling: adding agent ``j`` to every prior mask adds the cross weights
    from ``j`` into that mask.
    """
    m = weights.shape[0]
    v = np.zeros(1)
    for j in range(m):
        cross = np.zeros(1)
        for i in range(j):
            cross = np.concatenate([cross, cross + weights[i, j]])
        v = np.concatenate([v, v + cross])
    return v


@dataclass(frozen=True)
class CoalitionStructure:
    """A disjoint, complete partition of the agents, with its cached value.

    Coalitions are kept sorted by their lowest member index; ``value`` is the
    sum of the member coalition values.
    """

    coalitions: tuple[int, ...]
    value: float

    @classmethod
    def from_masks(cls, game: ISGame, masks) -> "CoalitionStructure":
        ordered = tuple(sorted((int(m) for m in masks), key=lowest_set_bit))
        value = cs_value(game, ordered)
        return cls(ordered, value)

    @classmethod
    def singletons(cls, game: ISGame) -> "CoalitionStructure":
        return cls(tuple(1 << i for i in range(game.n)), 0.0)

    @classmethod
    def grand(cls, game: ISGame) -> "CoalitionStructure":
        m = full_mask(game.n)
        return cls((m,), coalition_value(game, m))

    def validate(self, game: ISGame) -> None:
        """Re-check disjointness, completeness and the cached value."""
        v = cs_value(game, self.coalitions)
        if abs(v - self.value) > VALUE_ATOL:
            raise ValidationError(f"cached value {self.value} != recomputed {v}")

    def member_lists(self, base: int = 0) -> list[list[int]]:
        """Coalitions as lists of agent indices (``base`` added to each)."""
        return [[i + base for i in mask_members(m)] for m in self.coalitions]

    def __len__(self):
        return len(self.coalitions)

    def __iter__(self):
        return iter(self.coalitions)


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------

def generate_game(spec: GameSpec) -> ISGame:
    """Draw a fully connected game with i.i.d. edge weights.

    The ``n(n-1)/2`` upper-triangle entries are drawn row-major from the
    spec's distribution and mirrored; the same (spec, seed) always yields
    the same matrix.
    """
    n = spec.n
    rng = np.random.default_rng(spec.seed)
    draws = spec.distribution.sample(rng, n * (n - 1) // 2)
    w = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    w[iu] = draws
    w += w.T
    return ISGame(w, seed=spec.seed, distribution=spec.distribution)


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def game_to_json(game: ISGame) -> str:
    """Serialize a game; floats keep full round-trip precision."""
    obj: dict = {"n": game.n, "weights": game.weights.tolist()}
    if game.seed is not None:
        obj["seed"] = game.seed
    if game.distribution is not None:
        obj["distribution"] = game.distribution.to_json()
    return json.dumps(obj, indent=2)


def game_from_json(text: str) -> ISGame:
    """Parse and strictly validate a game; errors name the offending field."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameFormatError(f"malformed JSON: {e}") from e
    if not isinstance(obj, dict):
        raise GameFormatError("top level must be an object")
    if "n" not in obj:
        raise GameFormatError("missing field 'n'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise GameFormatError("'n' must be an integer")
    if not 1 <= n <= MAX_AGENTS:
        raise GameFormatError(f"'n' must be in [1, {MAX_AGENTS}], got {n}")
    rows = obj.get("weights")
    if not isinstance(rows, list) or len(rows) != n:
        raise GameFormatError(f"'weights' must be an array of {n} rows")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise GameFormatError(f"weights[{i}] must be an array of {n} numbers")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise GameFormatError(f"weights[{i}][{j}] is not a number")
    w = np.array(rows, dtype=np.float64)
    if np.any(np.diagonal(w) != 0.0):
        k = int(np.flatnonzero(np.diagonal(w))[0])
        raise GameFormatError(f"weights[{k}][{k}] must be 0")
    if not np.array_equal(w, w.T):
        i, j = np.argwhere(w != w.T)[0]
        raise GameFormatError(f"weights[{i}][{j}] != weights[{j}][{i}]")
    seed = obj.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise GameFormatError("'seed' must be an integer")
    dist = obj.get("distribution")
    return ISGame(w, seed=seed,
                  distribution=distribution_from_json(dist) if dist is not None else None)


def load_game(path) -> ISGame:
    with open(path, "r", encoding="utf-8") as f:
        return game_from_json(f.read())


def save_game(game: ISGame, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(game_to_json(game) + "\n")


def sample_game() -> ISGame:
    """The bundled 4-agent sample game used across docs and tests."""
    text = importlib.resources.files("coalcut.data").joinpath("sample4.json").read_text()
    return game_from_json(text)
