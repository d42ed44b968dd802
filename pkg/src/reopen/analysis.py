"""Shock decompositions, classical input-output comparisons, perturbation
ensembles and the scenario trade-off report."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from . import engine, shocks
from .data import DataValidationError, EconParams
from .epi import r0_estimate
from .shocks import build_schedule, policy_lambda

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Direct vs indirect shock decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShockDecomposition:
    """Per-industry direct, indirect and total shocks to gross output and to
    final consumption, as relative fractions. Industries with no final
    consumption carry NaN in the consumption decomposition."""

    codes: tuple
    day: int
    os_direct: np.ndarray
    os_indirect: np.ndarray
    os_total: np.ndarray
    cs_direct: np.ndarray
    cs_indirect: np.ndarray
    cs_total: np.ndarray


def shock_decomposition(series, calib, economy, t):
    """Decompose day-``t`` outcomes into first-order and network effects.

    The direct output shock is the (negative) labor-supply shock; the direct
    consumption shock applies the demand and other-final-demand shocks to
    baseline final demand. Indirect parts are residuals, so the additivity
    ``total = direct + indirect`` holds identically."""
    if not 0 <= t < len(series):
        raise DataValidationError(f"day {t} outside the recorded series")
    os_direct = -calib.eps_S
    os_total = series.x[t] / economy.x0 - 1.0
    final0 = economy.c0 + economy.f0
    shocked0 = (1.0 - calib.eps_D) * economy.c0 + (1.0 - calib.f_shock) * economy.f0
    with np.errstate(divide="ignore", invalid="ignore"):
        cs_direct = np.where(final0 > 0, (shocked0 - final0) / final0, np.nan)
        cs_total = np.where(final0 > 0,
                            (series.c[t] + series.f[t]) / final0 - 1.0, np.nan)
    return ShockDecomposition(
        codes=economy.codes, day=t,
        os_direct=os_direct, os_total=os_total, os_indirect=os_total - os_direct,
        cs_direct=cs_direct, cs_total=cs_total, cs_indirect=cs_total - cs_direct)


# ---------------------------------------------------------------------------
# Classical input-output solutions
# ---------------------------------------------------------------------------

def _spectral_radius(M):
    return float(np.max(np.abs(np.linalg.eigvals(M))))


def leontief_solve(economy, c_shocked, f_shocked):
    """Demand-driven equilibrium output: (I - A)^-1 (c + f)."""
    if _spectral_radius(economy.A) >= 1.0:
        raise DataValidationError("technical-coefficient matrix is not productive")
    rhs = np.asarray(c_shocked, dtype=float) + np.asarray(f_shocked, dtype=float)
    return np.linalg.solve(np.eye(economy.n) - economy.A, rhs)


def ghosh_solve(economy, l_shocked, e0=None):
    """Supply-driven equilibrium output: (I - B')^-1 (l + e).

    ``e0`` defaults to all non-labor value added (other expenses plus
    profits), so the unshocked call reproduces baseline output exactly."""
    if _spectral_radius(economy.B) >= 1.0:
        raise DataValidationError("allocation-coefficient matrix is not productive")
    e = economy.e0 + economy.pi0 if e0 is None else np.asarray(e0, dtype=float)
    rhs = np.asarray(l_shocked, dtype=float) + e
    return np.linalg.solve(np.eye(economy.n) - economy.B.T, rhs)


def first_order_final_demand(economy, calib):
    """Final demand with only the first-order shocks applied."""
    c = (1.0 - calib.eps_D) * economy.c0
    f = (1.0 - calib.f_shock) * economy.f0
    return c, f


def leontief_comparison_run(economy, criticality, calib, targets, params,
                            horizon=1500):
    """Run the engine in the configuration comparable to the Leontief model:
    demand shocks only, effectively unlimited inventories, no hiring or
    firing, full income replacement and full saving of unspent demand.

    Returns (per-industry simulated output at the end, Leontief solution,
    capacity-capped mask)."""
    calib_d = calib.without_supply_shocks()
    params_d = replace(params, gamma_H=0.0, gamma_F=0.0, delta_s_save=1.0, b=1.0)
    targets_big = targets.with_uniform_days(1e4)
    schedule = build_schedule(economy, calib_d, params_d, "Lockdown", horizon)
    series = engine.run_simulation(economy, criticality, targets_big, params_d,
                                   schedule, horizon)
    c_shocked, f_shocked = first_order_final_demand(economy, calib_d)
    x_leontief = leontief_solve(economy, c_shocked, f_shocked)
    x_model = series.x[-1]
    capped = x_leontief > economy.x0 * (1.0 - 1e-9)
    return x_model, x_leontief, capped


def ghosh_comparison_run(economy, criticality, calib, targets, params,
                         horizon=600):
    """Engine steady state under supply shocks only, next to the Ghosh
    solution for the shocked labor inputs (same frictionless configuration
    as the Leontief comparison)."""
    calib_s = calib.without_demand_shocks()
    params_s = replace(params, gamma_H=0.0, gamma_F=0.0, delta_s_save=1.0, b=1.0)
    schedule = build_schedule(economy, calib_s, params_s, "Lockdown", horizon)
    series = engine.run_simulation(economy, criticality,
                                   targets.with_uniform_days(1e4), params_s,
                                   schedule, horizon)
    x_ghosh = ghosh_solve(economy, (1.0 - calib_s.eps_S) * economy.l0)
    return series.x[-1], x_ghosh


# ---------------------------------------------------------------------------
# Perturbation ensembles
# ---------------------------------------------------------------------------

ENSEMBLE_MODES = ("both", "supply_only", "demand_only")


@dataclass(frozen=True)
class EnsembleSummary:
    """Daily quantile band of aggregate output across perturbed runs."""

    days: np.ndarray
    median: np.ndarray
    q25: np.ndarray
    q75: np.ndarray
    q025: np.ndarray
    q975: np.ndarray
    base: np.ndarray
    n_runs: int
    sigma: float

    def band_nested(self):
        return bool(np.all((self.q025 <= self.q25 + 1e-12)
                           & (self.q25 <= self.median + 1e-12)
                           & (self.median <= self.q75 + 1e-12)
                           & (self.q75 <= self.q975 + 1e-12)))


def _perturbed_calibration(calib, sigma, rng, mode):
    if sigma == 0.0:
        return calib
    n = calib.n
    eps_S, eps_D = calib.eps_S, calib.eps_D
    if mode in ("both", "supply_only"):
        eps_S = np.clip(eps_S * (1.0 + rng.normal(0.0, sigma, n)), 0.0, 1.0)
    if mode in ("both", "demand_only"):
        # Demand shocks may legitimately be negative (demand increases).
        eps_D = np.clip(eps_D * (1.0 + rng.normal(0.0, sigma, n)), -1.0, 1.0)
    return replace(calib, eps_S=eps_S, eps_D=eps_D)


def perturbation_ensemble(economy, criticality, calib, targets, params,
                          sigma, n_runs, seed, mode="both",
                          scenario_id="Lockdown", horizon=180):
    """Re-run the lockdown simulation with multiplicatively perturbed
    first-order shocks and summarize aggregate output quantiles per day."""
    if mode not in ENSEMBLE_MODES:
        raise DataValidationError(f"unknown ensemble mode {mode!r}")
    if sigma < 0:
        raise DataValidationError("sigma must be non-negative")
    if n_runs < 1:
        raise DataValidationError("need at least one run")
    base_schedule = build_schedule(economy, calib, params, scenario_id, horizon)
    base = engine.run_simulation(economy, criticality, targets, params,
                                 base_schedule, horizon).x_tot
    runs = np.empty((n_runs, horizon + 1))
    seeds = np.random.SeedSequence(seed).spawn(n_runs)
    for k in range(n_runs):
        rng = np.random.default_rng(seeds[k])
        pert = _perturbed_calibration(calib, sigma, rng, mode)
        schedule = build_schedule(economy, pert, params, scenario_id, horizon)
        runs[k] = engine.run_simulation(economy, criticality, targets, params,
                                        schedule, horizon).x_tot
    q = np.quantile(runs, [0.025, 0.25, 0.5, 0.75, 0.975], axis=0)
    return EnsembleSummary(days=np.arange(horizon + 1), q025=q[0], q25=q[1],
                           median=q[2], q75=q[3], q975=q[4], base=base,
                           n_runs=n_runs, sigma=sigma)


# ---------------------------------------------------------------------------
# Scenario report
# ---------------------------------------------------------------------------

REPORT_SCENARIOS = ("Lockdown", "ManufConstruction", "AllExceptConsumerFacing",
                    "AllExceptConsumerFacingSchools", "Open", "PreLockdown")

REOPEN_WINDOW_DAYS = 30


@dataclass(frozen=True)
class ScenarioRow:
    scenario_id: str
    r0: float
    r0_sd: float
    r0_unrescaled: float
    beta: dict
    va_change_pp: float
    gdp_pct: float
    series: engine.SimSeries

    def to_dict(self, with_series=False):
        out = {"scenario": self.scenario_id, "r0": self.r0, "r0_sd": self.r0_sd,
               "r0_unrescaled": self.r0_unrescaled, "beta": self.beta,
               "va_change_pp": self.va_change_pp, "gdp_pct": self.gdp_pct}
        if with_series:
            out["series"] = self.series.to_dict()
        return out


@dataclass(frozen=True)
class ScenarioReport:
    rows: tuple

    def row(self, scenario_id):
        for r in self.rows:
            if r.scenario_id == scenario_id:
                return r
        raise KeyError(scenario_id)

    def to_dicts(self, with_series=False):
        return [r.to_dict(with_series=with_series) for r in self.rows]


def _mean_va_window(series, params):
    start = params.t_end_lockdown
    stop = start + REOPEN_WINDOW_DAYS
    if stop > len(series):
        raise DataValidationError("series too short for the reopening window")
    return float(series.va_tot[start:stop].mean())


def scenario_report(scenario_ids, economy, criticality, calib, targets, params,
                    epi_calib, horizon=None):
    """Trade-off table: epidemic impact vs economic boost per scenario.

    Each scenario is simulated through the lockdown and its reopening; the
    value-added boost is the mean daily value added over the first month
    after reopening, expressed in percentage points of the pre-lockdown level
    relative to the continued-lockdown counterfactual."""
    if horizon is None:
        horizon = params.t_end_lockdown + REOPEN_WINDOW_DAYS
    va0 = float(economy.value_added0.sum())
    lock_schedule = build_schedule(economy, calib, params, "Lockdown", horizon)
    lock_series = engine.run_simulation(economy, criticality, targets, params,
                                        lock_schedule, horizon)
    lock_mean = _mean_va_window(lock_series, params)

    rows = []
    for scenario_id in scenario_ids:
        scenario_id = shocks.canonical_scenario(scenario_id)
        if scenario_id == "Lockdown":
            series = lock_series
        else:
            schedule = build_schedule(economy, calib, params, scenario_id, horizon)
            series = engine.run_simulation(economy, criticality, targets, params,
                                           schedule, horizon)
        mean_va = _mean_va_window(series, params)
        est = r0_estimate(policy_lambda(scenario_id, calib), epi_calib, calib)
        # The pre-lockdown bar reports the external unrescaled estimate.
        shown_r0 = est.r0_unrescaled if scenario_id == "PreLockdown" else est.r0
        shown_sd = 0.2 * shown_r0
        rows.append(ScenarioRow(
            scenario_id=scenario_id,
            r0=shown_r0, r0_sd=shown_sd, r0_unrescaled=est.r0_unrescaled,
            beta=est.breakdown.to_dict(),
            va_change_pp=100.0 * (mean_va - lock_mean) / va0,
            gdp_pct=100.0 * mean_va / va0,
            series=series))
    return ScenarioReport(rows=tuple(rows))
