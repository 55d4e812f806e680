"""Scheduling strategies: exhaustive search (P-OPT), the centralized
Hungarian heuristic (C-HUN), its interference-blind variant (C-NINT) and
the random/equal-power baseline (R-EPA), plus the closed-form solution of
the dual linear program that motivates the heuristic.

All strategies map one drop (GainTable, ScenarioParams) to a
ScheduleOutcome whose metrics are computed on the true gains.  Schedules
must fit the channel budget: a drop with I UL and J DL users and P pairs
occupies I + J - P channels, so at least I + J - F pairs are forced.
"""

from __future__ import annotations

import enum
import itertools
from typing import Callable, Optional

import numpy as np

from .assignment import BenefitMatrix, assign_with_solo
from .model import (
    GainTable,
    Pairing,
    PowerAllocation,
    ScenarioParams,
    ScheduleOutcome,
    WeightVector,
    require_valid,
)
from .radio import (
    corner_points,
    corner_tables,
    make_weights,
    outcome_metrics,
)

_P_OPT_MAX_USERS = 10


class StrategyId(enum.Enum):
    P_OPT = "P-OPT"
    C_HUN = "C-HUN"
    C_NINT = "C-NINT"
    R_EPA = "R-EPA"


# ---------------------------------------------------------------------------
# Hungarian pipeline (shared by C-HUN and C-NINT)
# ---------------------------------------------------------------------------

def _hungarian_schedule(
    planning_gains: GainTable,
    params: ScenarioParams,
    weights: WeightVector,
) -> tuple[Pairing, PowerAllocation]:
    """Benefit matrix -> assignment -> per-pair corner powers.

    Decisions are taken on planning_gains; the caller chooses which gains
    the outcome is evaluated on.
    """
    tables = corner_tables(planning_gains, params, weights)
    num_ul, num_dl = planning_gains.num_ul, planning_gains.num_dl
    if num_ul and num_dl:
        values = np.take_along_axis(
            tables.benefit, tables.best_corner[:, :, None], axis=2)[:, :, 0]
    else:
        values = np.zeros((num_ul, num_dl))
    matrix = BenefitMatrix(values, tables.solo_contrib_ul, tables.solo_contrib_dl)
    pairing, _ = assign_with_solo(matrix, params.num_channels)

    corners = corner_points(params)
    p_ul = np.full(num_ul, params.p_max_ul_w)
    p_dl = np.full(num_dl, params.p_max_dl_w)
    for i, j in pairing.pairs():
        p_u, p_d = corners[tables.best_corner[i, j]]
        p_ul[i] = p_u
        p_dl[j] = p_d
    return pairing, PowerAllocation(p_ul, p_dl)


def solve_c_hun(gains: GainTable, params: ScenarioParams) -> ScheduleOutcome:
    """Centralized Hungarian heuristic.

    Each candidate pair is scored at its best power corner, the assignment
    problem over those scores (with stand-alone options where the channel
    budget permits) is solved exactly, and the stored corner powers are
    applied.
    """
    require_valid(params)
    weights = make_weights(params.weight_mode, gains)
    pairing, powers = _hungarian_schedule(gains, params, weights)
    return outcome_metrics(pairing, powers, gains, params, weights)


def solve_c_nint(gains: GainTable, params: ScenarioParams) -> ScheduleOutcome:
    """C-HUN planned as if UE-to-UE interference did not exist.

    The benefit matrix is built with all cross gains zeroed, so the planner
    overestimates every DL SINR; the returned outcome is evaluated on the
    true gains, so planned and realized spectral efficiencies differ.
    """
    require_valid(params)
    weights = make_weights(params.weight_mode, gains)
    blind = GainTable(
        g_ul=gains.g_ul,
        g_dl=gains.g_dl,
        g_cross=np.zeros_like(gains.g_cross),
        positions=gains.positions,
    )
    pairing, powers = _hungarian_schedule(blind, params, weights)
    return outcome_metrics(pairing, powers, gains, params, weights)


# ---------------------------------------------------------------------------
# Exhaustive search
# ---------------------------------------------------------------------------

def _power_candidates(
    gains: GainTable,
    params: ScenarioParams,
    power_levels: int,
) -> tuple[list[tuple[float, float]], np.ndarray, np.ndarray]:
    """Candidate (p_u, p_d) pairs and the SE of every (i, j, candidate).

    power_levels = 0 uses the three corner points; power_levels >= 2 spans
    a uniform grid over [0, Pmax]^2 to quantify how much the corner
    restriction costs (diagnostic only).
    """
    noise = params.noise_power_w
    if power_levels == 0:
        candidates = list(corner_points(params))
    else:
        if power_levels < 2:
            raise ValueError("power_levels must be 0 (corners) or >= 2 (grid)")
        ul_levels = np.linspace(0.0, params.p_max_ul_w, power_levels)
        dl_levels = np.linspace(0.0, params.p_max_dl_w, power_levels)
        candidates = [(float(a), float(b)) for a in ul_levels for b in dl_levels]
    p_u = np.array([c[0] for c in candidates])
    p_d = np.array([c[1] for c in candidates])
    se_ul = np.log2(1.0 + p_u[None, None, :] * gains.g_ul[:, None, None]
                    / (noise + p_d[None, None, :] * params.si_cancellation))
    se_dl = np.log2(1.0 + p_d[None, None, :] * gains.g_dl[None, :, None]
                    / (noise + p_u[None, None, :] * gains.g_cross[:, :, None]))
    return candidates, se_ul, se_dl


def solve_p_opt(
    gains: GainTable,
    params: ScenarioParams,
    power_levels: int = 0,
) -> ScheduleOutcome:
    """Exhaustive search over all channel-feasible matchings and powers.

    Every matching with at least I + J - F pairs is enumerated (at full
    load, I = J = F, that means perfect matchings only); for each, every
    per-pair power candidate combination is scored against the true
    objective with the global minimum term.  Unpaired users transmit at max
    power, which is optimal for them in a single cell.  Guarded to
    I + J <= 10 users.
    """
    require_valid(params)
    num_ul, num_dl = gains.num_ul, gains.num_dl
    if num_ul + num_dl > _P_OPT_MAX_USERS:
        raise ValueError(f"P-OPT is limited to {_P_OPT_MAX_USERS} users, "
                         f"got {num_ul + num_dl}")
    mu = params.mu
    weights = make_weights(params.weight_mode, gains)
    candidates, cand_se_ul, cand_se_dl = _power_candidates(gains, params, power_levels)
    n_cand = len(candidates)

    # Weighted-sum and pair-minimum of every (i, j, candidate).
    pair_ws = (1.0 - mu) * (weights.alpha_ul[:, None, None] * cand_se_ul
                            + weights.alpha_dl[None, :, None] * cand_se_dl)
    pair_min = np.minimum(cand_se_ul, cand_se_dl)

    tables = corner_tables(gains, params, weights)
    solo_ws_ul, solo_ws_dl = tables.solo_contrib_ul, tables.solo_contrib_dl
    solo_se_ul, solo_se_dl = tables.solo_se_ul, tables.solo_se_dl

    min_pairs = max(0, num_ul + num_dl - params.num_channels)
    if min_pairs > min(num_ul, num_dl):
        raise ValueError(f"channel budget infeasible: {num_ul}+{num_dl} users on "
                         f"{params.num_channels} channels")

    best_value = -np.inf
    best_pairs: list[tuple[int, int]] = []
    best_combo: tuple[int, ...] = ()
    for n_pairs in range(min_pairs, min(num_ul, num_dl) + 1):
        for ul_subset in itertools.combinations(range(num_ul), n_pairs):
            ul_solo = [i for i in range(num_ul) if i not in ul_subset]
            ws_ul_solo = float(solo_ws_ul[ul_solo].sum())
            for dl_subset in itertools.combinations(range(num_dl), n_pairs):
                dl_solo = [j for j in range(num_dl) if j not in dl_subset]
                base_ws = ws_ul_solo + float(solo_ws_dl[dl_solo].sum())
                solo_se = np.concatenate([solo_se_ul[ul_solo], solo_se_dl[dl_solo]])
                base_min = float(solo_se.min()) if solo_se.size else np.inf
                for perm in itertools.permutations(dl_subset):
                    pairs = list(zip(ul_subset, perm))
                    shape = (n_cand,) * n_pairs
                    grid_ws = np.full(shape, base_ws)
                    grid_min = np.full(shape, base_min)
                    for axis, (i, j) in enumerate(pairs):
                        view = [1] * n_pairs
                        view[axis] = n_cand
                        grid_ws = grid_ws + pair_ws[i, j].reshape(view)
                        grid_min = np.minimum(grid_min, pair_min[i, j].reshape(view))
                    grid_obj = grid_ws + mu * grid_min
                    flat_idx = int(np.argmax(grid_obj))
                    value = float(grid_obj.flat[flat_idx])
                    if value > best_value:
                        best_value = value
                        best_pairs = pairs
                        best_combo = np.unravel_index(flat_idx, shape) if n_pairs else ()

    pairing = Pairing.from_pairs(best_pairs, num_ul, num_dl)
    p_ul = np.full(num_ul, params.p_max_ul_w)
    p_dl = np.full(num_dl, params.p_max_dl_w)
    for (i, j), cand in zip(best_pairs, best_combo):
        p_u, p_d = candidates[cand]
        p_ul[i] = p_u
        p_dl[j] = p_d
    powers = PowerAllocation(p_ul, p_dl)
    return outcome_metrics(pairing, powers, gains, params, weights)


# ---------------------------------------------------------------------------
# Random baseline
# ---------------------------------------------------------------------------

def solve_r_epa(
    gains: GainTable,
    params: ScenarioParams,
    rng: np.random.Generator,
) -> ScheduleOutcome:
    """Uniformly random maximal matching with everyone at max power."""
    require_valid(params)
    if rng is None:
        raise ValueError("R-EPA needs a random generator")
    num_ul, num_dl = gains.num_ul, gains.num_dl
    if num_ul <= num_dl:
        perm = rng.permutation(num_dl)
        pairing = Pairing.from_ul_partners([int(perm[i]) for i in range(num_ul)], num_dl)
    else:
        perm = rng.permutation(num_ul)
        pairing = Pairing.from_pairs([(int(perm[j]), j) for j in range(num_dl)],
                                     num_ul, num_dl)
    powers = PowerAllocation(np.full(num_ul, params.p_max_ul_w),
                             np.full(num_dl, params.p_max_dl_w))
    weights = make_weights(params.weight_mode, gains)
    return outcome_metrics(pairing, powers, gains, params, weights)


# ---------------------------------------------------------------------------
# Dual LP
# ---------------------------------------------------------------------------

def dual_multipliers(c, mu: float) -> np.ndarray:
    """Exact solution of: minimize c . lam  s.t.  sum(lam) = mu, lam >= 0.

    All mass goes to the user with minimum spectral efficiency (first index
    on ties), so the optimum value is mu * min(c).
    """
    c = np.asarray(c, dtype=float)
    if c.size == 0:
        raise ValueError("dual_multipliers needs a nonempty vector")
    if np.any(c < 0):
        raise ValueError("spectral efficiencies must be nonnegative")
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    lam = np.zeros(c.size)
    lam[int(np.argmin(c))] = mu
    return lam


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

Strategy = Callable[[GainTable, ScenarioParams, Optional[np.random.Generator]],
                    ScheduleOutcome]

STRATEGIES: dict[str, Strategy] = {
    StrategyId.P_OPT.value: lambda gains, params, rng=None: solve_p_opt(gains, params),
    StrategyId.C_HUN.value: lambda gains, params, rng=None: solve_c_hun(gains, params),
    StrategyId.C_NINT.value: lambda gains, params, rng=None: solve_c_nint(gains, params),
    StrategyId.R_EPA.value: lambda gains, params, rng=None: solve_r_epa(gains, params, rng),
}


def register_strategy(name: str, fn: Strategy) -> None:
    if name in STRATEGIES:
        raise ValueError(f"strategy {name!r} already registered")
    STRATEGIES[name] = fn


def solve(name: str, gains: GainTable, params: ScenarioParams,
          rng: np.random.Generator | None = None) -> ScheduleOutcome:
    try:
        strategy = STRATEGIES[name]
    except KeyError:
        raise KeyError(f"unknown strategy {name!r}; known: {sorted(STRATEGIES)}") from None
    return strategy(gains, params, rng)
