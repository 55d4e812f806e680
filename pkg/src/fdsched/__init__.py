"""fdsched: pairing and power allocation for full-duplex cellular cells.

A base station capable of in-band full-duplex can serve one uplink and one
downlink user on the same frequency channel.  This package simulates such
a single cell, schedules user pairs and binary transmit powers under a
tunable efficiency/fairness objective, and benchmarks the Hungarian-based
heuristic against exhaustive search and random baselines over seeded
Monte Carlo drops.
"""

from .assignment import BenefitMatrix, assign_with_solo, brute_force_assignment, hungarian_max
from .harness import (
    ExperimentConfig,
    RunRecord,
    canned_experiments,
    config_from_dict,
    load_config,
    run_experiment,
)
from .metrics import CdfSeries, empirical_cdf, jain_index, median_gap, percentile
from .model import (
    GainTable,
    Pairing,
    PowerAllocation,
    ScenarioParams,
    ScheduleOutcome,
    WeightMode,
    WeightVector,
    dbm_to_watts,
    validate_params,
    watts_to_dbm,
)
from .radio import (
    PairEvaluation,
    evaluate_pair,
    evaluate_solo_dl,
    evaluate_solo_ul,
    make_weights,
    outcome_metrics,
    sinr_dl,
    sinr_ul,
    spectral_efficiency,
)
from .scenario import PropagationModel, build_gain_table, drop_users, link_gain, load_scenario, save_scenario
from .solvers import (
    STRATEGIES,
    StrategyId,
    dual_multipliers,
    register_strategy,
    solve,
    solve_c_hun,
    solve_c_nint,
    solve_p_opt,
    solve_r_epa,
)

__version__ = "0.1.0"
