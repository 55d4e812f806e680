"""Shared domain types, unit conversions and parameter validation.

Everything downstream computes in linear units: watts for powers and
dimensionless linear factors for path gains.  dB and dBm appear only at the
configuration and reporting boundaries.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


# ---------------------------------------------------------------------------
# Unit conversions
# ---------------------------------------------------------------------------

def dbm_to_watts(x_dbm: float) -> float:
    """Convert a power level in dBm to watts."""
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    """Convert a power in watts to dBm. Requires p_w > 0."""
    return 10.0 * math.log10(p_w) + 30.0


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


# ---------------------------------------------------------------------------
# Scenario parameters
# ---------------------------------------------------------------------------

class WeightMode(enum.Enum):
    """How the per-user weights of the scheduling objective are chosen.

    SUM_RATE uses unit weights everywhere.  PATH_LOSS_COMPENSATION uses the
    reciprocal of each user's direct-link gain, which biases the weighted-sum
    term toward cell-edge users.
    """

    SUM_RATE = "SR"
    PATH_LOSS_COMPENSATION = "PL"

    @classmethod
    def from_key(cls, key: str) -> "WeightMode":
        for mode in cls:
            if mode.value == key:
                return mode
        raise ValueError(f"unknown weight mode {key!r}; expected one of "
                         f"{[m.value for m in cls]}")


@dataclass(frozen=True)
class ScenarioParams:
    """Physical and system constants for one simulated cell.

    Defaults correspond to the small fully-loaded urban-micro setup used by
    the canned experiments: 2.5 GHz carrier, 100 m cell, per-channel noise
    of -116.4 dBm, 24 dBm power caps and -100 dB residual self-interference.
    """

    num_ul: int = 4
    num_dl: int = 4
    num_channels: int = 4
    cell_radius_m: float = 100.0
    carrier_hz: float = 2.5e9
    noise_power_w: float = dbm_to_watts(-116.4)
    si_cancellation: float = db_to_linear(-100.0)  # linear residual-SI factor
    p_max_ul_w: float = dbm_to_watts(24.0)
    p_max_dl_w: float = dbm_to_watts(24.0)
    mu: float = 0.5
    weight_mode: WeightMode = WeightMode.SUM_RATE
    min_bs_ue_distance_m: float = 3.0
    rng_seed: int = 0


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return "OK" if self.ok else "; ".join(self.violations)


def validate_params(p: ScenarioParams) -> ValidationReport:
    """Check all ScenarioParams invariants and report every violation."""
    bad: list[str] = []
    if p.num_ul < 0 or p.num_dl < 0:
        bad.append(f"num_ul/num_dl must be nonnegative, got {p.num_ul}/{p.num_dl}")
    if p.num_ul + p.num_dl < 1:
        bad.append("at least one user required (num_ul + num_dl >= 1)")
    if p.num_channels < 1:
        bad.append(f"num_channels must be >= 1, got {p.num_channels}")
    if p.num_ul > p.num_channels:
        bad.append(f"num_ul ({p.num_ul}) exceeds num_channels ({p.num_channels})")
    if p.num_dl > p.num_channels:
        bad.append(f"num_dl ({p.num_dl}) exceeds num_channels ({p.num_channels})")
    if not 0.0 <= p.mu <= 1.0:
        bad.append(f"mu must lie in [0, 1], got {p.mu}")
    if not p.cell_radius_m > 0:
        bad.append(f"cell_radius_m must be positive, got {p.cell_radius_m}")
    if not p.carrier_hz > 0:
        bad.append(f"carrier_hz must be positive, got {p.carrier_hz}")
    if not p.noise_power_w > 0:
        bad.append(f"noise_power_w must be positive, got {p.noise_power_w}")
    if not 0.0 < p.si_cancellation <= 1.0:
        bad.append(f"si_cancellation must lie in (0, 1], got {p.si_cancellation}")
    if not p.p_max_ul_w > 0 or not p.p_max_dl_w > 0:
        bad.append("power caps p_max_ul_w/p_max_dl_w must be positive")
    if p.min_bs_ue_distance_m < 0:
        bad.append(f"min_bs_ue_distance_m must be >= 0, got {p.min_bs_ue_distance_m}")
    elif p.min_bs_ue_distance_m >= p.cell_radius_m * math.sqrt(3) / 2:
        bad.append("min_bs_ue_distance_m leaves no room inside the cell hexagon")
    if not isinstance(p.weight_mode, WeightMode):
        bad.append(f"weight_mode must be a WeightMode, got {p.weight_mode!r}")
    return ValidationReport(tuple(bad))


def require_valid(p: ScenarioParams) -> ScenarioParams:
    """Raise ValueError if params are invalid; convenient at module entry."""
    report = validate_params(p)
    if not report.ok:
        raise ValueError(f"invalid scenario parameters: {report}")
    return p


# ---------------------------------------------------------------------------
# Per-drop state
# ---------------------------------------------------------------------------

def _readonly(a) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DropPositions:
    """BS and UE coordinates of one network drop, in meters (audit data)."""

    bs: np.ndarray   # shape (2,)
    ul: np.ndarray   # shape (I, 2)
    dl: np.ndarray   # shape (J, 2)

    def __post_init__(self):
        object.__setattr__(self, "bs", _readonly(self.bs))
        object.__setattr__(self, "ul", _readonly(self.ul).reshape(-1, 2))
        object.__setattr__(self, "dl", _readonly(self.dl).reshape(-1, 2))


@dataclass(frozen=True)
class GainTable:
    """Linear-scale path gains of one network drop.

    g_ul[i] is the gain from UL user i to the BS, g_dl[j] from the BS to DL
    user j, and g_cross[i, j] the interfering gain from UL user i to DL user
    j.  Arrays are read-only after construction.
    """

    g_ul: np.ndarray       # shape (I,)
    g_dl: np.ndarray       # shape (J,)
    g_cross: np.ndarray    # shape (I, J)
    positions: Optional[DropPositions] = None

    def __post_init__(self):
        object.__setattr__(self, "g_ul", _readonly(self.g_ul))
        object.__setattr__(self, "g_dl", _readonly(self.g_dl))
        g = _readonly(self.g_cross)
        if g.ndim != 2 or g.shape != (self.g_ul.size, self.g_dl.size):
            raise ValueError(f"g_cross shape {g.shape} does not match "
                             f"({self.g_ul.size}, {self.g_dl.size})")
        object.__setattr__(self, "g_cross", g)

    @property
    def num_ul(self) -> int:
        return self.g_ul.size

    @property
    def num_dl(self) -> int:
        return self.g_dl.size


def validate_gain_table(g: GainTable) -> ValidationReport:
    bad = []
    for name, arr in (("g_ul", g.g_ul), ("g_dl", g.g_dl), ("g_cross", g.g_cross)):
        if arr.size and not np.all(np.isfinite(arr)):
            bad.append(f"{name} has non-finite entries")
        if arr.size and not np.all(arr > 0):
            bad.append(f"{name} has non-positive entries")
    return ValidationReport(tuple(bad))


# ---------------------------------------------------------------------------
# Scheduling decisions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pairing:
    """Partial matching between UL and DL users.

    partner_of_ul[i] is the DL index paired with UL user i, or None when the
    user holds a frequency channel alone; partner_of_dl is the symmetric
    view.  Both views are kept consistent by construction.
    """

    partner_of_ul: tuple
    partner_of_dl: tuple

    def __post_init__(self):
        for j, i in enumerate(self.partner_of_dl):
            if i is None:
                continue
            if not 0 <= i < len(self.partner_of_ul) or self.partner_of_ul[i] != j:
                raise ValueError("pairing views are inconsistent")
        for i, j in enumerate(self.partner_of_ul):
            if j is None:
                continue
            if not 0 <= j < len(self.partner_of_dl) or self.partner_of_dl[j] != i:
                raise ValueError("pairing views are inconsistent")

    @classmethod
    def from_ul_partners(cls, partners: Sequence[Optional[int]], num_dl: int) -> "Pairing":
        dl_view: list[Optional[int]] = [None] * num_dl
        for i, j in enumerate(partners):
            if j is None:
                continue
            if not 0 <= j < num_dl:
                raise ValueError(f"DL partner index {j} out of range")
            if dl_view[j] is not None:
                raise ValueError(f"DL user {j} paired with more than one UL user")
            dl_view[j] = i
        return cls(tuple(partners), tuple(dl_view))

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, int]], num_ul: int, num_dl: int) -> "Pairing":
        ul_view: list[Optional[int]] = [None] * num_ul
        for i, j in pairs:
            if ul_view[i] is not None:
                raise ValueError(f"UL user {i} paired with more than one DL user")
            ul_view[i] = j
        return cls.from_ul_partners(ul_view, num_dl)

    @property
    def num_pairs(self) -> int:
        return sum(1 for j in self.partner_of_ul if j is not None)

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.partner_of_ul) if j is not None]

    def to_matrix(self) -> np.ndarray:
        """0/1 pairing matrix with row and column sums at most one."""
        x = np.zeros((len(self.partner_of_ul), len(self.partner_of_dl)))
        for i, j in self.pairs():
            x[i, j] = 1.0
        return x


@dataclass(frozen=True)
class PowerAllocation:
    """Transmit powers in watts: p_ul per UL user, p_dl per DL channel."""

    p_ul: np.ndarray
    p_dl: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p_ul", _readonly(self.p_ul))
        object.__setattr__(self, "p_dl", _readonly(self.p_dl))


@dataclass(frozen=True)
class WeightVector:
    """Per-user objective weights (dimensionless, strictly positive)."""

    alpha_ul: np.ndarray
    alpha_dl: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha_ul", _readonly(self.alpha_ul))
        object.__setattr__(self, "alpha_dl", _readonly(self.alpha_dl))


@dataclass(frozen=True)
class ScheduleOutcome:
    """Full result of one scheduling decision on one drop.

    objective is the scalarized value (1-mu) * sum(alpha * SE) + mu * min(SE)
    with the minimum ranging over all UL and DL users together.
    """

    pairing: Pairing
    powers: PowerAllocation
    se_ul: np.ndarray      # bit/s/Hz per UL user
    se_dl: np.ndarray      # bit/s/Hz per DL user
    objective: float
    sum_se: float
    min_se: float
    jain: float

    def __post_init__(self):
        object.__setattr__(self, "se_ul", _readonly(self.se_ul))
        object.__setattr__(self, "se_dl", _readonly(self.se_dl))

    def all_se(self) -> np.ndarray:
        return np.concatenate([self.se_ul, self.se_dl])
