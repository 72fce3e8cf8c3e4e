"""Exact solvers: optimal bipartitions and optimal coalition structures.

Two independent routes to the optimal structure are provided — a subset
dynamic program over bitmasks and a plain enumeration of all set partitions —
so each can serve as an oracle for the other in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import ValidationError
from .game import (
    VALUE_ATOL,
    CoalitionStructure,
    ISGame,
    full_mask,
    mask_members,
    subset_values,
)


@dataclass(frozen=True)
class SplitResult:
    """Best proper bipartition of a coalition into two non-empty halves.

    ``left`` is the half containing the coalition's lowest-index agent (the
    canonical orientation); ``combined_value`` is v(left) + v(right);
    ``improved`` records whether the split clears the acceptance bar
    combined_value >= v(parent), up to the package value tolerance.
    """

    left: int
    right: int
    combined_value: float
    improved: bool

    def __post_init__(self):
        if self.left & self.right:
            raise ValidationError("split halves overlap")
        if self.left == 0 or self.right == 0:
            raise ValidationError("split halves must both be non-empty")


def best_split_bruteforce(game: ISGame, s: int) -> SplitResult:
    """Scan all 2^(m-1) - 1 proper bipartitions of a coalition.

    The lowest-index member is pinned to the left half so each unordered
    split is visited once; ties go to the numerically smallest left mask
    (the lowest agent alone, in the fully degenerate case).
    """
    members = mask_members(s)
    m = len(members)
    if m < 2:
        raise ValidationError(f"cannot split a coalition of size {m}")
    v = subset_values(game.induced_weights(s))
    # local right-halves are the non-zero even masks (bit 0 belongs to left)
    rights = np.arange(1, 1 << (m - 1)) << 1
    lefts = ((1 << m) - 1) ^ rights
    totals = v[lefts] + v[rights]
    # rights ascend, so lefts descend: the last maximum has the smallest left
    k = int(np.flatnonzero(totals == totals.max())[-1])
    to_global = lambda local: sum(1 << members[i] for i in range(m) if (local >> i) & 1)
    combined = float(totals[k])
    improved = combined >= float(v[(1 << m) - 1]) - VALUE_ATOL
    return SplitResult(to_global(int(lefts[k])), to_global(int(rights[k])), combined, improved)


@numba.njit(cache=True)
def _dp_fill(v, f, choice):
    """Subset DP over all masks: f[S] = max(v[S], max_T f[T] + f[S^T]).

    T ranges over submasks of S containing S's lowest set bit, ascending, so
    each unordered split is tried once.  choice[S] is the winning T, or 0
    when keeping S whole is at least as good.
    """
    size = f.shape[0]
    for s in range(1, size):
        best = v[s]
        best_t = 0
        low = s & -s
        rest = s ^ low
        # iterate submasks u of rest ascending; the candidate half T = low | u
        # stays proper because u == rest (i.e. T == s) terminates the loop
        u = 0
        while u != rest:
            t = low | u
            cand = f[t] + f[s ^ t]
            if cand > best:
                best = cand
                best_t = t
            u = (u - rest) & rest
        f[s] = best
        choice[s] = best_t


def dp_optimal_cs(game: ISGame) -> CoalitionStructure:
    """Optimal coalition structure by dynamic programming over subsets.

    Runs in O(3^n) time and O(2^n) memory.  The value of the returned
    structure is recomputed from the reconstructed coalitions, so it matches
    ``cs_value`` bit for bit; among equally good structures the one picked
    is fixed by the ascending submask iteration order.
    """
    n = game.n
    v = subset_values(game.weights)
    f = v.copy()
    choice = np.zeros(1 << n, dtype=np.int64)
    _dp_fill(v, f, choice)
    # unwind the choice table into coalitions
    masks = []
    stack = [full_mask(n)]
    while stack:
        s = stack.pop()
        t = int(choice[s])
        if t == 0:
            masks.append(s)
        else:
            stack.append(t)
            stack.append(s ^ t)
    return CoalitionStructure.from_masks(game, masks)


def iter_set_partitions(n: int):
    """Yield every partition of range(n) as a list of bitmasks.

    Uses restricted growth strings: agent i joins an existing block or opens
    a new one, so each partition appears exactly once.
    """
    def rec(i, blocks):
        if i == n:
            yield blocks
            return
        for k in range(len(blocks)):
            blocks[k] |= 1 << i
            yield from rec(i + 1, blocks)
            blocks[k] ^= 1 << i
        blocks.append(1 << i)
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def enumerate_all_partitions(game: ISGame) -> tuple[float, CoalitionStructure]:
    """Optimal value and structure by enumerating every set partition.

    Visits all Bell(n) partitions, so it is capped at n <= 10; exists as an
    independent check on the dynamic program.
    """
    if game.n > 10:
        raise ValidationError(f"partition enumeration capped at n=10, got {game.n}")
    v = subset_values(game.weights)
    best_val = -np.inf
    best_masks = None
    for masks in iter_set_partitions(game.n):
        total = float(sum(v[m] for m in masks))
        if total > best_val:
            best_val = total
            best_masks = list(masks)
    cs = CoalitionStructure.from_masks(game, best_masks)
    return cs.value, cs
