"""Monte Carlo experiment harness.

One experiment sweeps (strategy, mu, weight mode) combinations over N
independent network drops.  Every combination of one drop sees the same
GainTable, so cross-strategy comparisons are paired.  Substream seeds are
derived from the master seed and the drop index by a counter-based split,
which makes results independent of scheduling order and parallelism.

Outputs per run directory:
  config.json    resolved configuration (deterministic)
  records.jsonl  one record per (drop, strategy, mu, weight mode)
  cdf_*.csv      empirical CDF per metric and combination
  summary.json   medians and pairwise median gaps
  timing.log     wall-clock sidecar; the only non-deterministic file
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import metrics
from .model import (
    GainTable,
    ScenarioParams,
    ValidationReport,
    WeightMode,
    db_to_linear,
    dbm_to_watts,
    validate_params,
)
from .scenario import build_gain_table, scenario_to_dict
from .solvers import STRATEGIES, StrategyId, solve

_ROLE_SCENARIO = 0
_ROLE_STRATEGY = 1

METRIC_NAMES = ("objective", "sum_se", "min_se", "jain")

CANNED_NAMES = ("fig2", "fig3", "fig4")


class ConfigError(ValueError):
    """Raised for malformed or invalid experiment configurations."""


@dataclass(frozen=True)
class ExperimentConfig:
    params: ScenarioParams
    strategies: tuple[str, ...]
    mu_values: tuple[float, ...]
    weight_modes: tuple[WeightMode, ...]
    iterations: int
    out_dir: str
    parallelism: int = 1
    dump_scenarios: bool = False
    name: str = "experiment"


def validate_config(cfg: ExperimentConfig) -> ValidationReport:
    bad = list(validate_params(cfg.params).violations)
    if cfg.iterations < 1:
        bad.append(f"iterations must be >= 1, got {cfg.iterations}")
    if not cfg.strategies:
        bad.append("at least one strategy required")
    for s in cfg.strategies:
        if s not in STRATEGIES:
            bad.append(f"unknown strategy {s!r}; known: {sorted(STRATEGIES)}")
    users = cfg.params.num_ul + cfg.params.num_dl
    if StrategyId.P_OPT.value in cfg.strategies and users > 10:
        bad.append(f"P-OPT allowed only for up to 10 users, got {users}")
    if not cfg.mu_values:
        bad.append("at least one mu value required")
    for mu in cfg.mu_values:
        if not 0.0 <= mu <= 1.0:
            bad.append(f"mu must lie in [0, 1], got {mu}")
    if not cfg.weight_modes:
        bad.append("at least one weight mode required")
    if cfg.parallelism < 1:
        bad.append(f"parallelism must be >= 1, got {cfg.parallelism}")
    return ValidationReport(tuple(bad))


def require_valid_config(cfg: ExperimentConfig) -> ExperimentConfig:
    report = validate_config(cfg)
    if not report.ok:
        raise ConfigError(f"invalid experiment config: {report}")
    return cfg


# ---------------------------------------------------------------------------
# Seeding
# ---------------------------------------------------------------------------

def drop_rng(master_seed: int, drop_index: int, role: int) -> np.random.Generator:
    """Independent substream for (drop, role), stable across parallelism."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(drop_index, role))
    return np.random.default_rng(ss)


def _gain_hash(gains: GainTable) -> str:
    digest = hashlib.sha256()
    for arr in (gains.g_ul, gains.g_dl, gains.g_cross):
        digest.update(np.ascontiguousarray(arr).tobytes())
    return digest.hexdigest()[:16]


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunRecord:
    """Metrics of one (drop, strategy, mu, weight mode) evaluation.

    wall_time_s is measurement metadata and is excluded from the
    deterministic serialization.
    """

    drop: int
    strategy: str
    mu: float
    weight_mode: str
    objective: float
    sum_se: float
    min_se: float
    jain: float
    se_ul: tuple[float, ...]
    se_dl: tuple[float, ...]
    seed: str
    gain_hash: str
    wall_time_s: float = 0.0

    def to_json_dict(self) -> dict:
        doc = dataclasses.asdict(self)
        doc.pop("wall_time_s")
        doc["se_ul"] = list(doc["se_ul"])
        doc["se_dl"] = list(doc["se_dl"])
        return doc


def _run_drop(cfg: ExperimentConfig, drop_index: int):
    """Worker: evaluate all requested combinations on one drop."""
    started = time.perf_counter()
    master = cfg.params.rng_seed
    gains = build_gain_table(cfg.params, drop_rng(master, drop_index, _ROLE_SCENARIO))
    table_hash = _gain_hash(gains)
    records = []
    for mode in cfg.weight_modes:
        for mu in cfg.mu_values:
            params = dataclasses.replace(cfg.params, mu=mu, weight_mode=mode)
            for name in cfg.strategies:
                # Fresh generator per solve: randomized strategies make the
                # same draw for every (mu, mode) combination of the drop.
                outcome = solve(name, gains, params,
                                drop_rng(master, drop_index, _ROLE_STRATEGY))
                records.append(RunRecord(
                    drop=drop_index,
                    strategy=name,
                    mu=mu,
                    weight_mode=mode.value,
                    objective=outcome.objective,
                    sum_se=outcome.sum_se,
                    min_se=outcome.min_se,
                    jain=outcome.jain,
                    se_ul=tuple(outcome.se_ul.tolist()),
                    se_dl=tuple(outcome.se_dl.tolist()),
                    seed=f"{master}:{drop_index}",
                    gain_hash=table_hash,
                ))
    elapsed = time.perf_counter() - started
    records = [dataclasses.replace(r, wall_time_s=elapsed) for r in records]
    scenario_doc = scenario_to_dict(gains) if cfg.dump_scenarios else None
    return records, scenario_doc, elapsed


# ---------------------------------------------------------------------------
# Experiment driver
# ---------------------------------------------------------------------------

def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run all drops, write result files, return a small result index.

    Raises ConfigError for invalid configurations; on runtime failure a
    FAILED marker with the error text is left in the output directory and
    the exception propagates.
    """
    require_valid_config(cfg)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(json.dumps(config_to_dict(cfg), indent=1,
                                                sort_keys=True) + "\n")

    records: list[RunRecord] = []
    timings: list[str] = []
    try:
        results = {}
        if cfg.parallelism == 1:
            for k in range(cfg.iterations):
                results[k] = _run_drop(cfg, k)
        else:
            with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
                futures = {k: pool.submit(_run_drop, cfg, k)
                           for k in range(cfg.iterations)}
                for k in range(cfg.iterations):
                    results[k] = futures[k].result()
        for k in range(cfg.iterations):  # merge in drop order
            drop_records, scenario_doc, elapsed = results[k]
            records.extend(drop_records)
            timings.append(f"drop {k}: {elapsed:.4f} s")
            if scenario_doc is not None:
                scen_dir = out / "scenarios"
                scen_dir.mkdir(exist_ok=True)
                (scen_dir / f"drop_{k:04d}.json").write_text(
                    json.dumps(scenario_doc, indent=1, sort_keys=True))
    except ConfigError:
        raise
    except Exception as exc:
        _flush_records(out, records)
        (out / "FAILED").write_text(f"{type(exc).__name__}: {exc}\n")
        raise

    _flush_records(out, records)
    cdf_files = _write_cdfs(out, cfg, records)
    summary = _write_summary(out, cfg, records)
    (out / "timing.log").write_text(
        time.strftime("run finished %Y-%m-%dT%H:%M:%S\n") + "\n".join(timings) + "\n")
    return {"out_dir": str(out), "records": len(records),
            "cdf_files": cdf_files, "summary": summary}


def _flush_records(out: Path, records: list[RunRecord]) -> None:
    lines = [json.dumps(r.to_json_dict(), sort_keys=True) for r in records]
    (out / "records.jsonl").write_text("\n".join(lines) + ("\n" if lines else ""))


def _combo_records(records, strategy, mu, mode):
    return [r for r in records
            if r.strategy == strategy and r.mu == mu and r.weight_mode == mode.value]


def _write_cdfs(out: Path, cfg: ExperimentConfig, records) -> list[str]:
    files = []
    for mode in cfg.weight_modes:
        for mu in cfg.mu_values:
            for strategy in cfg.strategies:
                combo = _combo_records(records, strategy, mu, mode)
                for metric in METRIC_NAMES:
                    series = metrics.empirical_cdf(
                        [getattr(r, metric) for r in combo],
                        metric=metric, strategy=strategy, mu=mu,
                        weight_mode=mode.value)
                    path = out / f"cdf_{metric}_{strategy}_mu{mu}_{mode.value}.csv"
                    series.write_csv(path)
                    files.append(path.name)
    return files


def _write_summary(out: Path, cfg: ExperimentConfig, records) -> dict:
    medians: dict[str, float] = {}
    for mode in cfg.weight_modes:
        for mu in cfg.mu_values:
            for strategy in cfg.strategies:
                combo = _combo_records(records, strategy, mu, mode)
                for metric in METRIC_NAMES:
                    series = metrics.empirical_cdf([getattr(r, metric) for r in combo])
                    key = f"{metric}|{strategy}|mu={mu}|{mode.value}"
                    medians[key] = metrics.percentile(series, 50)
    gaps: dict[str, float | None] = {}
    for mode in cfg.weight_modes:
        for mu in cfg.mu_values:
            for metric in METRIC_NAMES:
                for a in cfg.strategies:
                    for b in cfg.strategies:
                        if a == b:
                            continue
                        pa = medians[f"{metric}|{a}|mu={mu}|{mode.value}"]
                        pb = medians[f"{metric}|{b}|mu={mu}|{mode.value}"]
                        key = f"{metric}|{a}-vs-{b}|mu={mu}|{mode.value}"
                        gaps[key] = (pa - pb) / pb if pb != 0 else None
    summary = {"name": cfg.name, "iterations": cfg.iterations,
               "master_seed": cfg.params.rng_seed, "medians": medians, "gaps": gaps}
    (out / "summary.json").write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n")
    return summary


# ---------------------------------------------------------------------------
# Canned experiments
# ---------------------------------------------------------------------------

def canned_experiments(name: str, seed: int = 1, iterations: int = 400,
                       out_dir: str | None = None,
                       parallelism: int = 1) -> ExperimentConfig:
    """Preset experiment configurations.

    fig2: small fully loaded system (4 UL, 4 DL, 4 channels), sum-rate
    weights, mu in {0.1, 0.5, 0.9}; exhaustive search vs the Hungarian
    heuristic (optimality-gap study).

    fig3/fig4: fully loaded system at 25 users per direction, mu = 0.9,
    both weight modes; Hungarian heuristic vs its interference-blind
    variant vs the random baseline.  fig3 is read for fairness, fig4 for
    sum spectral efficiency; both come from the same run.
    """
    if name not in CANNED_NAMES:
        raise ConfigError(f"unknown canned experiment {name!r}; known: {CANNED_NAMES}")
    if name == "fig2":
        params = ScenarioParams(num_ul=4, num_dl=4, num_channels=4, rng_seed=seed)
        strategies = (StrategyId.P_OPT.value, StrategyId.C_HUN.value)
        mu_values = (0.1, 0.5, 0.9)
        weight_modes = (WeightMode.SUM_RATE,)
    else:
        params = ScenarioParams(num_ul=25, num_dl=25, num_channels=25, rng_seed=seed)
        strategies = (StrategyId.C_HUN.value, StrategyId.C_NINT.value,
                      StrategyId.R_EPA.value)
        mu_values = (0.9,)
        weight_modes = (WeightMode.SUM_RATE, WeightMode.PATH_LOSS_COMPENSATION)
    return ExperimentConfig(
        params=params,
        strategies=strategies,
        mu_values=mu_values,
        weight_modes=weight_modes,
        iterations=iterations,
        out_dir=out_dir or f"results/{name}",
        parallelism=parallelism,
        name=name,
    )


# ---------------------------------------------------------------------------
# JSON configuration
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "name", "cell_radius_m", "num_ul", "num_dl", "num_channels", "carrier_ghz",
    "noise_dbm", "si_cancellation_db", "p_max_ul_dbm", "p_max_dl_dbm",
    "min_bs_ue_distance_m", "strategies", "mu_values", "weight_modes",
    "iterations", "seed", "parallelism", "out_dir", "dump_scenarios",
}


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Build a config from a JSON document in reporting units.

    Physical quantities use the units of the parameter table (m, GHz, dBm,
    dB) and are converted to linear units here.
    """
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        params = ScenarioParams(
            num_ul=int(doc.get("num_ul", 4)),
            num_dl=int(doc.get("num_dl", 4)),
            num_channels=int(doc.get("num_channels", 4)),
            cell_radius_m=float(doc.get("cell_radius_m", 100.0)),
            carrier_hz=float(doc.get("carrier_ghz", 2.5)) * 1e9,
            noise_power_w=dbm_to_watts(float(doc.get("noise_dbm", -116.4))),
            si_cancellation=db_to_linear(float(doc.get("si_cancellation_db", -100.0))),
            p_max_ul_w=dbm_to_watts(float(doc.get("p_max_ul_dbm", 24.0))),
            p_max_dl_w=dbm_to_watts(float(doc.get("p_max_dl_dbm", 24.0))),
            min_bs_ue_distance_m=float(doc.get("min_bs_ue_distance_m", 3.0)),
            rng_seed=int(doc.get("seed", 0)),
        )
        modes = tuple(WeightMode.from_key(k) for k in doc.get("weight_modes", ["SR"]))
        cfg = ExperimentConfig(
            params=params,
            strategies=tuple(doc.get("strategies", [StrategyId.C_HUN.value])),
            mu_values=tuple(float(m) for m in doc.get("mu_values", [0.5])),
            weight_modes=modes,
            iterations=int(doc.get("iterations", 1)),
            out_dir=str(doc.get("out_dir", "results/experiment")),
            parallelism=int(doc.get("parallelism", 1)),
            dump_scenarios=bool(doc.get("dump_scenarios", False)),
            name=str(doc.get("name", "experiment")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config value: {exc}") from exc
    return require_valid_config(cfg)


def load_config(path) -> ExperimentConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return config_from_dict(doc)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Inverse of config_from_dict, back in reporting units."""
    p = cfg.params
    return {
        "name": cfg.name,
        "cell_radius_m": p.cell_radius_m,
        "num_ul": p.num_ul,
        "num_dl": p.num_dl,
        "num_channels": p.num_channels,
        "carrier_ghz": p.carrier_hz / 1e9,
        "noise_dbm": 10 * np.log10(p.noise_power_w) + 30,
        "si_cancellation_db": 10 * np.log10(p.si_cancellation),
        "p_max_ul_dbm": 10 * np.log10(p.p_max_ul_w) + 30,
        "p_max_dl_dbm": 10 * np.log10(p.p_max_dl_w) + 30,
        "min_bs_ue_distance_m": p.min_bs_ue_distance_m,
        "strategies": list(cfg.strategies),
        "mu_values": list(cfg.mu_values),
        "weight_modes": [m.value for m in cfg.weight_modes],
        "iterations": cfg.iterations,
        "seed": p.rng_seed,
        "parallelism": cfg.parallelism,
        "out_dir": cfg.out_dir,
        "dump_scenarios": cfg.dump_scenarios,
    }
