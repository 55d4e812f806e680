"""Physical-layer math: SINRs, spectral efficiencies, weights and the
corner-point evaluation of one UL/DL pair.

A pair sharing a frequency channel interacts two ways: the DL transmission
leaks into the BS receiver through the residual self-interference factor,
and the UL transmitter interferes with the DL receiver through the UE-to-UE
cross gain.  Users alone on a channel see neither term.

The per-pair power choice is restricted to the three corner points
(Pmax_u, Pmax_d), (Pmax_u, 0) and (0, Pmax_d); binary power control is
optimal for the weighted-sum part of the objective, and the same corner set
is applied to the fairness-weighted benefit (see evaluate_pair).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .metrics import jain_index
from .model import (
    GainTable,
    Pairing,
    PowerAllocation,
    ScenarioParams,
    ScheduleOutcome,
    WeightMode,
    WeightVector,
)


def sinr_ul(p_u: float, g_ib: float, p_d_paired: float, beta: float, noise: float) -> float:
    """UL SINR at the BS: p_u g_ib / (noise + p_d_paired * beta).

    p_d_paired is the DL power sharing the channel, 0 when unpaired.
    """
    return p_u * g_ib / (noise + p_d_paired * beta)


def sinr_dl(p_d: float, g_bj: float, p_u_paired: float, g_ij: float, noise: float) -> float:
    """DL SINR at the UE: p_d g_bj / (noise + p_u_paired * g_ij)."""
    return p_d * g_bj / (noise + p_u_paired * g_ij)


def spectral_efficiency(sinr) -> float:
    """Shannon spectral efficiency log2(1 + sinr) in bit/s/Hz."""
    return np.log2(1.0 + sinr)


def make_weights(mode: WeightMode, gains: GainTable) -> WeightVector:
    """Unit weights for SUM_RATE; reciprocal direct gains for PL compensation."""
    if mode is WeightMode.SUM_RATE:
        return WeightVector(np.ones(gains.num_ul), np.ones(gains.num_dl))
    if mode is WeightMode.PATH_LOSS_COMPENSATION:
        if (gains.g_ul.size and gains.g_ul.min() <= 0) or \
           (gains.g_dl.size and gains.g_dl.min() <= 0):
            raise ValueError("path-loss compensation needs strictly positive direct gains")
        return WeightVector(1.0 / gains.g_ul, 1.0 / gains.g_dl)
    raise ValueError(f"unknown weight mode {mode!r}")


def benefit_value(c_u, c_d, alpha_u, alpha_d, mu):
    """Pair benefit (1-mu)(a_u c_u + a_d c_d) + mu min(c_u, c_d)."""
    return (1.0 - mu) * (alpha_u * c_u + alpha_d * c_d) + mu * np.minimum(c_u, c_d)


def corner_points(params: ScenarioParams) -> tuple[tuple[float, float], ...]:
    """The three candidate (p_u, p_d) corners, in tie-break preference order."""
    pu, pd = params.p_max_ul_w, params.p_max_dl_w
    return ((pu, pd), (pu, 0.0), (0.0, pd))


@dataclass(frozen=True)
class PairEvaluation:
    """Best corner of one candidate pair and its benefit."""

    ul_index: int
    dl_index: int
    best_powers: tuple[float, float]
    se_ul: float
    se_dl: float
    benefit: float


def evaluate_pair(
    i: int,
    j: int,
    gains: GainTable,
    params: ScenarioParams,
    weights: WeightVector,
) -> PairEvaluation:
    """Evaluate the three power corners of pair (i, j) and keep the argmax.

    Ties resolve toward (Pmax, Pmax), then (Pmax, 0): serve both users when
    the benefit does not say otherwise.
    """
    noise = params.noise_power_w
    alpha_u = weights.alpha_ul[i]
    alpha_d = weights.alpha_dl[j]
    best = None
    for p_u, p_d in corner_points(params):
        c_u = math.log2(1.0 + sinr_ul(p_u, gains.g_ul[i], p_d, params.si_cancellation, noise))
        c_d = math.log2(1.0 + sinr_dl(p_d, gains.g_dl[j], p_u, gains.g_cross[i, j], noise))
        s = benefit_value(c_u, c_d, alpha_u, alpha_d, params.mu)
        if best is None or s > best.benefit:
            best = PairEvaluation(i, j, (p_u, p_d), c_u, c_d, s)
    return best


def evaluate_solo_ul(i: int, gains: GainTable, params: ScenarioParams,
                     weights: WeightVector) -> tuple[float, float]:
    """(SE, weighted-sum contribution) of UL user i alone at max power."""
    se = math.log2(1.0 + sinr_ul(params.p_max_ul_w, gains.g_ul[i], 0.0,
                                 params.si_cancellation, params.noise_power_w))
    return se, (1.0 - params.mu) * weights.alpha_ul[i] * se


def evaluate_solo_dl(j: int, gains: GainTable, params: ScenarioParams,
                     weights: WeightVector) -> tuple[float, float]:
    """(SE, weighted-sum contribution) of DL user j alone at max power."""
    se = math.log2(1.0 + sinr_dl(params.p_max_dl_w, gains.g_dl[j], 0.0, 0.0,
                                 params.noise_power_w))
    return se, (1.0 - params.mu) * weights.alpha_dl[j] * se


# ---------------------------------------------------------------------------
# Vectorized corner tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CornerTables:
    """Spectral efficiencies of every (i, j, corner) combination.

    se_ul/se_dl have shape (I, J, 3) with the corner axis ordered as
    corner_points(); benefit has the same shape.  best_corner[i, j] is the
    argmax corner index with first-wins tie-breaking, so it honors the same
    preference order as evaluate_pair.  solo_se_* and solo_contrib_* cover
    the stand-alone alternative at max power.
    """

    se_ul: np.ndarray
    se_dl: np.ndarray
    benefit: np.ndarray
    best_corner: np.ndarray
    solo_se_ul: np.ndarray
    solo_se_dl: np.ndarray
    solo_contrib_ul: np.ndarray
    solo_contrib_dl: np.ndarray


def corner_tables(gains: GainTable, params: ScenarioParams,
                  weights: WeightVector) -> CornerTables:
    """Vectorized equivalent of evaluate_pair over the full I x J grid."""
    noise = params.noise_power_w
    pu, pd = params.p_max_ul_w, params.p_max_dl_w
    num_ul, num_dl = gains.num_ul, gains.num_dl

    ul_paired = np.log2(1.0 + pu * gains.g_ul / (noise + pd * params.si_cancellation))
    ul_solo = np.log2(1.0 + pu * gains.g_ul / noise)
    dl_solo = np.log2(1.0 + pd * gains.g_dl / noise)
    dl_paired = np.log2(1.0 + pd * gains.g_dl[None, :] / (noise + pu * gains.g_cross))

    se_ul = np.zeros((num_ul, num_dl, 3))
    se_dl = np.zeros((num_ul, num_dl, 3))
    se_ul[:, :, 0] = ul_paired[:, None]
    se_ul[:, :, 1] = ul_solo[:, None]
    se_dl[:, :, 0] = dl_paired
    se_dl[:, :, 2] = dl_solo[None, :]

    benefit = benefit_value(se_ul, se_dl,
                            weights.alpha_ul[:, None, None],
                            weights.alpha_dl[None, :, None], params.mu)
    best_corner = benefit.argmax(axis=2) if num_ul and num_dl else \
        np.zeros((num_ul, num_dl), dtype=int)

    return CornerTables(
        se_ul=se_ul,
        se_dl=se_dl,
        benefit=benefit,
        best_corner=best_corner,
        solo_se_ul=ul_solo,
        solo_se_dl=dl_solo,
        solo_contrib_ul=(1.0 - params.mu) * weights.alpha_ul * ul_solo,
        solo_contrib_dl=(1.0 - params.mu) * weights.alpha_dl * dl_solo,
    )


# ---------------------------------------------------------------------------
# Outcome assembly
# ---------------------------------------------------------------------------

def outcome_metrics(
    pairing: Pairing,
    powers: PowerAllocation,
    gains: GainTable,
    params: ScenarioParams,
    weights: WeightVector,
) -> ScheduleOutcome:
    """Evaluate the realized SEs and scalar metrics of a full schedule.

    Every user's SINR follows from the actual pairing and power state: the
    interference term of a paired user comes from its partner's power, an
    unpaired user sees noise only.
    """
    num_ul, num_dl = gains.num_ul, gains.num_dl
    if len(pairing.partner_of_ul) != num_ul or len(pairing.partner_of_dl) != num_dl:
        raise ValueError("pairing dimensions do not match the gain table")
    if powers.p_ul.size != num_ul or powers.p_dl.size != num_dl:
        raise ValueError("power dimensions do not match the gain table")

    noise = params.noise_power_w
    se_ul = np.zeros(num_ul)
    se_dl = np.zeros(num_dl)
    for i in range(num_ul):
        j = pairing.partner_of_ul[i]
        p_d = powers.p_dl[j] if j is not None else 0.0
        se_ul[i] = math.log2(1.0 + sinr_ul(powers.p_ul[i], gains.g_ul[i], p_d,
                                           params.si_cancellation, noise))
    for j in range(num_dl):
        i = pairing.partner_of_dl[j]
        p_u = powers.p_ul[i] if i is not None else 0.0
        g_x = gains.g_cross[i, j] if i is not None else 0.0
        se_dl[j] = math.log2(1.0 + sinr_dl(powers.p_dl[j], gains.g_dl[j], p_u, g_x, noise))

    all_se = np.concatenate([se_ul, se_dl])
    weighted = float(weights.alpha_ul @ se_ul + weights.alpha_dl @ se_dl)
    min_se = float(all_se.min())
    objective = (1.0 - params.mu) * weighted + params.mu * min_se
    return ScheduleOutcome(
        pairing=pairing,
        powers=powers,
        se_ul=se_ul,
        se_dl=se_dl,
        objective=objective,
        sum_se=float(all_se.sum()),
        min_se=min_se,
        jain=jain_index(all_se),
    )
