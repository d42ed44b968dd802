"""Stateless HTTP/JSON service over the simulator.

Every request runs its own simulation against the shared read-only dataset;
identical request bodies produce identical responses. Validation failures
map to 422, malformed bodies to 400/422 (FastAPI), numerical failures to
500 with a diagnostic.
"""

from __future__ import annotations

import logging

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, field_validator

from . import analysis, engine, epi, shocks
from .bundle import data_digests, load_dataset
from .data import DataValidationError, load_econ_params
from .engine import NumericalError

logger = logging.getLogger(__name__)

SCENARIO_DESCRIPTIONS = {
    "PreLockdown": "economy fully open, no distancing",
    "Lockdown": "only essential on-site work and consumption",
    "ManufConstruction": "agriculture through construction reopen",
    "AllExceptConsumerFacing": "all industries reopen except retail, "
                               "hospitality and other services",
    "AllExceptConsumerFacingSchools": "as before, with schools fully open",
    "Open": "all industries open, remote work and home distancing persist",
}


class CustomPolicy(BaseModel):
    open_industries: list[str] = Field(default_factory=list)
    schools_open: bool = False
    home_distancing: bool = True
    onsite_consumption_open: bool = False
    delta_w: dict[str, float] = Field(default_factory=dict)
    delta_c: dict[str, float] = Field(default_factory=dict)

    @field_validator("delta_w", "delta_c")
    @classmethod
    def _unit_interval(cls, v):
        for code, value in v.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"delta[{code}]={value} outside [0, 1]")
        return v


class SimulateRequest(BaseModel):
    scenario: str | None = None
    custom: CustomPolicy | None = None
    params: dict[str, float | int | str | bool] = Field(default_factory=dict)
    horizon: int | None = Field(default=None, ge=1, le=2000)


class SensitivityRequest(BaseModel):
    sigma: float = Field(default=0.2, ge=0.0, le=1.0)
    n_runs: int = Field(default=100, ge=1, le=5000)
    seed: int = 0
    mode: str = "both"
    horizon: int = Field(default=180, ge=1, le=2000)

    @field_validator("mode")
    @classmethod
    def _known_mode(cls, v):
        if v not in analysis.ENSEMBLE_MODES:
            raise ValueError(f"mode must be one of {analysis.ENSEMBLE_MODES}")
        return v


def _scenario_definition(scenario_id, calib):
    opened = shocks.open_industries(scenario_id, calib.codes)
    return {
        "id": scenario_id,
        "description": SCENARIO_DESCRIPTIONS[scenario_id],
        "open_industries": [c for c, o in zip(calib.codes, opened) if o],
        "schools_open": scenario_id in ("PreLockdown", "Open",
                                        "AllExceptConsumerFacingSchools"),
        "onsite_consumption_open": scenario_id in ("PreLockdown", "Open"),
        "home_distancing": scenario_id != "PreLockdown",
    }


def create_app(dataset=None, data_dir=None):
    ds = dataset if dataset is not None else load_dataset(data_dir)
    app = FastAPI(title="reopen", version="0.1.0")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    def _policy_and_schedule(req, params, horizon):
        if req.custom is not None:
            unknown = [c for c in (set(req.custom.open_industries)
                                   | set(req.custom.delta_w)
                                   | set(req.custom.delta_c))
                       if c not in ds.codes]
            if unknown:
                raise DataValidationError(f"unknown industry codes {unknown}")
            mask = np.isin(np.array(ds.codes), req.custom.open_industries)
            lam = shocks.custom_policy_lambda(
                ds.calibration, mask,
                delta_s=1.0 if req.custom.schools_open else 0.0,
                delta_h=0.0 if req.custom.home_distancing else 1.0,
                open_consumption=req.custom.onsite_consumption_open,
                delta_w_overrides=req.custom.delta_w,
                delta_c_overrides=req.custom.delta_c)
            schedule = shocks.custom_schedule(ds.economy, ds.calibration,
                                              params, mask, horizon)
            scenario_id = "Custom"
        else:
            scenario_id = shocks.canonical_scenario(req.scenario or "Lockdown")
            lam = shocks.policy_lambda(scenario_id, ds.calibration)
            schedule = shocks.build_schedule(ds.economy, ds.calibration,
                                             params, scenario_id, horizon)
        return scenario_id, lam, schedule

    @app.get("/scenarios")
    def scenarios():
        return [_scenario_definition(s, ds.calibration)
                for s in analysis.REPORT_SCENARIOS]

    @app.get("/calibration")
    def calibration():
        params = {k: getattr(ds.params, k)
                  for k in ds.params.__dataclass_fields__}
        shares = epi.workforce_shares(ds.calibration, ds.epi.eta)
        return {
            "data_dir": str(ds.data_dir),
            "digests": data_digests(ds.data_dir),
            "n_industries": ds.economy.n,
            "codes": list(ds.codes),
            "totals": {
                "gross_output": float(ds.economy.x0.sum()),
                "consumption": float(ds.economy.c0.sum()),
                "other_final_demand": float(ds.economy.f0.sum()),
                "labor": float(ds.economy.l0.sum()),
                "value_added": float(ds.economy.value_added0.sum()),
            },
            "workforce_shares": shares,
            "params": params,
        }

    @app.post("/simulate")
    def simulate(req: SimulateRequest):
        try:
            params = load_econ_params(None, **{
                k: v for k, v in req.params.items()})
            horizon = req.horizon or max(180, params.t_end_lockdown
                                         + analysis.REOPEN_WINDOW_DAYS)
            # Simulate through the post-reopening window so the value-added
            # boost is always defined; the response series is truncated to
            # the requested horizon.
            run_horizon = max(horizon, params.t_end_lockdown
                              + analysis.REOPEN_WINDOW_DAYS)
            scenario_id, lam, schedule = _policy_and_schedule(req, params,
                                                              run_horizon)
            series = engine.run_simulation(ds.economy, ds.criticality,
                                           ds.targets, params, schedule,
                                           run_horizon)
            lock_schedule = shocks.build_schedule(ds.economy, ds.calibration,
                                                  params, "Lockdown",
                                                  run_horizon)
            lock = engine.run_simulation(ds.economy, ds.criticality,
                                         ds.targets, params, lock_schedule,
                                         run_horizon)
            est = epi.r0_estimate(lam, ds.epi, ds.calibration,
                                  adult_norm=params.mu_s_adult_norm)
            window = slice(params.t_end_lockdown,
                           params.t_end_lockdown + analysis.REOPEN_WINDOW_DAYS)
            va0 = float(ds.economy.value_added0.sum())
            va_change = 100.0 * float(series.va_tot[window].mean()
                                      - lock.va_tot[window].mean()) / va0
        except (DataValidationError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except (NumericalError, FloatingPointError,
                np.linalg.LinAlgError) as exc:
            raise HTTPException(status_code=500,
                                detail=f"numerical failure: {exc}")
        return {
            "scenario": scenario_id,
            "series": series.head(horizon).to_dict(),
            "beta": est.breakdown.to_dict(),
            "r0": est.r0,
            "r0_sd": est.r0_sd,
            "r0_unrescaled": est.r0_unrescaled,
            "va_change_pp": va_change,
        }

    @app.post("/sensitivity")
    def sensitivity(req: SensitivityRequest):
        try:
            summary = analysis.perturbation_ensemble(
                ds.economy, ds.criticality, ds.calibration, ds.targets,
                ds.params, sigma=req.sigma, n_runs=req.n_runs, seed=req.seed,
                mode=req.mode, horizon=req.horizon)
        except DataValidationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except (NumericalError, FloatingPointError) as exc:
            raise HTTPException(status_code=500,
                                detail=f"numerical failure: {exc}")
        return {
            "days": summary.days.tolist(),
            "median": summary.median.tolist(),
            "q25": summary.q25.tolist(),
            "q75": summary.q75.tolist(),
            "q025": summary.q025.tolist(),
            "q975": summary.q975.tolist(),
            "base": summary.base.tolist(),
            "n_runs": summary.n_runs,
            "sigma": summary.sigma,
        }

    return app
