"""Production-network pandemic simulator with an activity-decomposed
reproduction number."""

from .analysis import (EnsembleSummary, ScenarioReport, ghosh_solve,
                       leontief_solve, perturbation_ensemble,
                       scenario_report, shock_decomposition)
from .bundle import Dataset, RunManifest, load_dataset, resolve_data_dir
from .data import (CriticalityMatrix, DataValidationError, EconParams,
                   Economy, InventoryTargets, PandemicCalibration,
                   aggregate_criticality, generate_synthetic_economy,
                   inventory_targets_from_ratios, load_econ_params,
                   load_io_table, load_pandemic_calibration)
from .engine import (NumericalError, SimSeries, SimState, init_steady_state,
                     run_simulation, step)
from .epi import (BetaBreakdown, EpiCalibration, R0Estimate, beta_total,
                  intensity_weights, r0_estimate, sir_integrate)
from .shocks import (PolicyLambda, ShockSchedule, build_schedule,
                     policy_lambda)

__version__ = "0.1.0"

__all__ = [
    "BetaBreakdown", "CriticalityMatrix", "Dataset", "DataValidationError",
    "EconParams", "Economy", "EnsembleSummary", "EpiCalibration",
    "InventoryTargets", "NumericalError", "PandemicCalibration",
    "PolicyLambda", "R0Estimate", "RunManifest", "ScenarioReport",
    "ShockSchedule", "SimSeries", "SimState", "aggregate_criticality",
    "beta_total", "build_schedule", "generate_synthetic_economy",
    "ghosh_solve", "init_steady_state", "intensity_weights",
    "inventory_targets_from_ratios", "leontief_solve", "load_dataset",
    "load_econ_params", "load_io_table", "load_pandemic_calibration",
    "perturbation_ensemble", "policy_lambda", "r0_estimate",
    "resolve_data_dir", "run_simulation", "scenario_report",
    "shock_decomposition", "sir_integrate", "step",
]
