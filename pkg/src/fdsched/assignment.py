"""Maximization linear assignment: Hungarian solver plus a brute-force
permutation oracle, and the reduction that lets users stand alone.

hungarian_max and brute_force_assignment share one contract: the input is
padded with zero-benefit dummy cells to a square matrix, a maximum-total
perfect matching is found on that square, and only assignments inside the
original matrix are reported.  The oracle exists to verify the solver and
stays independent of it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .model import Pairing

_BRUTE_FORCE_MAX_SIZE = 9


@dataclass(frozen=True)
class BenefitMatrix:
    """Pairing benefits plus the score of leaving each user unpaired."""

    values: np.ndarray    # shape (I, J), benefit of pairing UL i with DL j
    solo_ul: np.ndarray   # shape (I,)
    solo_dl: np.ndarray   # shape (J,)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        solo_ul = np.asarray(self.solo_ul, dtype=float)
        solo_dl = np.asarray(self.solo_dl, dtype=float)
        if values.shape != (solo_ul.size, solo_dl.size):
            raise ValueError(f"benefit shape {values.shape} does not match solo "
                             f"vectors ({solo_ul.size}, {solo_dl.size})")
        for name, arr in (("values", values), ("solo_ul", solo_ul), ("solo_dl", solo_dl)):
            if arr.size and not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "solo_ul", solo_ul)
        object.__setattr__(self, "solo_dl", solo_dl)

    @property
    def num_ul(self) -> int:
        return self.solo_ul.size

    @property
    def num_dl(self) -> int:
        return self.solo_dl.size


def _padded_square(values: np.ndarray) -> np.ndarray:
    rows, cols = values.shape
    n = max(rows, cols)
    padded = np.zeros((n, n))
    padded[:rows, :cols] = values
    return padded


def _selected_total(values: np.ndarray, assignment: dict[int, int]) -> float:
    rows = sorted(assignment)
    cols = [assignment[r] for r in rows]
    return float(values[rows, cols].sum()) if rows else 0.0


def _min_cost_assignment(cost: np.ndarray) -> np.ndarray:
    """Exact minimum-cost perfect matching on a square cost matrix.

    Augmenting-path Hungarian with row/column potentials, O(n^3).  One row
    is inserted per outer iteration; the inner search grows an alternating
    tree over columns, tracking for every unreached column the smallest
    reduced slack (minv) and its tree attachment point (way).  Column n is
    a virtual root holding the row currently being inserted.
    """
    n = cost.shape[0]
    u = np.zeros(n)                              # row potentials
    v = np.zeros(n + 1)                          # column potentials
    row_of_col = np.full(n + 1, -1, dtype=int)
    for i in range(n):
        row_of_col[n] = i
        j0 = n
        minv = np.full(n, np.inf)
        way = np.full(n, n, dtype=int)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of_col[j0]
            reduced = cost[i0, :] - u[i0] - v[:n]
            improve = ~used[:n] & (reduced < minv)
            minv[improve] = reduced[improve]
            way[improve] = j0
            slack = np.where(used[:n], np.inf, minv)
            j1 = int(np.argmin(slack))
            delta = float(slack[j1])
            used_cols = np.flatnonzero(used)
            u[row_of_col[used_cols]] += delta
            v[used_cols] -= delta
            minv[~used[:n]] -= delta
            j0 = j1
            if row_of_col[j0] < 0:
                break
        while j0 != n:                           # augment along the tree path
            j_prev = way[j0]
            row_of_col[j0] = row_of_col[j_prev]
            j0 = j_prev
    col_of_row = np.empty(n, dtype=int)
    col_of_row[row_of_col[:n]] = np.arange(n)
    return col_of_row


def hungarian_max(values) -> tuple[dict[int, int], float]:
    """Maximum-total assignment of a rectangular benefit matrix.

    Returns (row -> column map over the original matrix, total benefit of
    the selected entries).  Reduction to the classical minimization form:
    pad to a square with zeros, then cost = max - benefit.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.size == 0:
        raise ValueError("assignment needs a nonempty 2-D matrix")
    if not np.all(np.isfinite(values)):
        raise ValueError("assignment matrix has non-finite entries")
    rows, cols = values.shape
    padded = _padded_square(values)
    col_of_row = _min_cost_assignment(padded.max() - padded)
    assignment = {r: int(col_of_row[r]) for r in range(rows) if col_of_row[r] < cols}
    return assignment, _selected_total(values, assignment)


def brute_force_assignment(values) -> tuple[dict[int, int], float]:
    """Exact optimum by enumerating all permutations of the padded square.

    Guarded to padded size 9; beyond that the factorial blows up.  Ties
    resolve to the lexicographically first permutation.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.size == 0:
        raise ValueError("assignment needs a nonempty 2-D matrix")
    rows, cols = values.shape
    n = max(rows, cols)
    if n > _BRUTE_FORCE_MAX_SIZE:
        raise ValueError(f"brute force limited to padded size {_BRUTE_FORCE_MAX_SIZE}, "
                         f"got {n}")
    best_perm = None
    best_total = -np.inf
    for perm in itertools.permutations(range(n)):
        total = sum(values[r, perm[r]] for r in range(rows) if perm[r] < cols)
        if total > best_total:
            best_total = total
            best_perm = perm
    assignment = {r: best_perm[r] for r in range(rows) if best_perm[r] < cols}
    return assignment, _selected_total(values, assignment)


def assign_with_solo(
    benefit: BenefitMatrix,
    num_channels: int | None = None,
) -> tuple[Pairing, float]:
    """Choose pairs or stand-alone users to maximize the separable benefit.

    Builds a square problem where matching UL i with DL j scores
    values[i, j] and matching a user with a dummy partner scores its solo
    contribution.  The number of dummy partners is limited by the channel
    budget: with P pairs the schedule occupies I + J - P channels, so at
    least I + J - num_channels pairs are forced.  With num_channels None
    the budget is treated as unlimited.
    """
    num_ul, num_dl = benefit.num_ul, benefit.num_dl
    forced_pairs = 0
    if num_channels is not None:
        forced_pairs = max(0, num_ul + num_dl - num_channels)
        if forced_pairs > min(num_ul, num_dl):
            raise ValueError(
                f"channel budget infeasible: {num_ul}+{num_dl} users on "
                f"{num_channels} channels")

    size = num_ul + num_dl - forced_pairs
    square = np.zeros((size, size))
    square[:num_ul, :num_dl] = benefit.values
    square[:num_ul, num_dl:] = benefit.solo_ul[:, None]
    square[num_ul:, :num_dl] = benefit.solo_dl[None, :]

    mapping, total = hungarian_max(square)
    pairs = [(r, c) for r, c in mapping.items() if r < num_ul and c < num_dl]
    return Pairing.from_pairs(pairs, num_ul, num_dl), total
