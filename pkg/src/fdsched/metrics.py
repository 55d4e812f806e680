"""Aggregate statistics across Monte Carlo drops: Jain's fairness index,
empirical CDFs, nearest-rank percentiles and median-gap summaries."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)


def jain_index(se) -> float:
    """Jain's fairness index (sum x)^2 / (n sum x^2) over per-user SEs.

    Ranges from 1/n (one user gets everything) to 1 (perfect equality).
    An all-zero vector is treated as perfectly fair and returns 1.
    """
    x = np.asarray(se, dtype=float)
    if x.size == 0:
        raise ValueError("jain_index needs a nonempty vector")
    if np.any(x < 0):
        raise ValueError("jain_index needs nonnegative entries")
    denom = x.size * float(x @ x)
    if denom == 0.0:
        log.warning("jain_index of an all-zero vector, returning 1.0")
        return 1.0
    return float(x.sum()) ** 2 / denom


@dataclass(frozen=True)
class CdfSeries:
    """Empirical CDF of one metric: sorted values with probabilities k/N."""

    values: np.ndarray
    probabilities: np.ndarray
    metric: str = ""
    strategy: str = ""
    mu: float = math.nan
    weight_mode: str = ""

    @classmethod
    def from_samples(cls, samples, metric="", strategy="", mu=math.nan,
                     weight_mode="") -> "CdfSeries":
        v = np.sort(np.asarray(samples, dtype=float))
        if v.size == 0:
            raise ValueError("empirical CDF needs at least one sample")
        p = np.arange(1, v.size + 1) / v.size
        return cls(values=v, probabilities=p, metric=metric, strategy=strategy,
                   mu=mu, weight_mode=weight_mode)

    def __len__(self) -> int:
        return self.values.size

    # CSV layout: one metadata comment line (metric, strategy, mu,
    # weight_mode), a column header, then value,probability rows.  Floats
    # use repr so files are byte-reproducible.
    def to_csv_lines(self) -> list[str]:
        lines = [f"# {self.metric},{self.strategy},{float(self.mu)!r},{self.weight_mode}",
                 "value,probability"]
        lines += [f"{float(v)!r},{float(p)!r}"
                  for v, p in zip(self.values, self.probabilities)]
        return lines

    def write_csv(self, path) -> None:
        Path(path).write_text("\n".join(self.to_csv_lines()) + "\n")

    @classmethod
    def read_csv(cls, path) -> "CdfSeries":
        lines = Path(path).read_text().splitlines()
        meta = lines[0].lstrip("# ").split(",")
        rows = [line.split(",") for line in lines[2:] if line]
        return cls(
            values=np.array([float(r[0]) for r in rows]),
            probabilities=np.array([float(r[1]) for r in rows]),
            metric=meta[0],
            strategy=meta[1],
            mu=float(meta[2]),
            weight_mode=meta[3],
        )


def empirical_cdf(samples, metric="", strategy="", mu=math.nan,
                  weight_mode="") -> CdfSeries:
    return CdfSeries.from_samples(samples, metric=metric, strategy=strategy,
                                  mu=mu, weight_mode=weight_mode)


def percentile(cdf: CdfSeries, q: float) -> float:
    """Nearest-rank percentile: smallest sample with CDF >= q/100.

    q=0 returns the minimum sample, q=100 the maximum; no interpolation.
    """
    if not 0 <= q <= 100:
        raise ValueError(f"percentile q must lie in [0, 100], got {q}")
    rank = max(1, math.ceil(q / 100.0 * len(cdf)))
    return float(cdf.values[rank - 1])


def median_gap(a: CdfSeries, b: CdfSeries) -> float:
    """Relative difference of medians, (p50(a) - p50(b)) / p50(b)."""
    pa, pb = percentile(a, 50), percentile(b, 50)
    if pb == 0.0:
        raise ZeroDivisionError("median of the baseline series is zero")
    return (pa - pb) / pb
