"""Time-indexed shock schedules and named reopening scenarios.

A scenario fixes two things: which industries get their labor-supply shock
lifted at reopening, and the policy vector (on-site work shares, on-site
consumption shares, schools, home distancing) used by the epidemic model.
Schedules are pure data, built once per run and shared read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import DataValidationError

SCENARIO_IDS = ("PreLockdown", "Lockdown", "ManufConstruction",
                "AllExceptConsumerFacing", "AllExceptConsumerFacingSchools",
                "Open", "Custom")

# ISIC section letters opened in the "Manufacturing and Construction"
# scenario (agriculture through construction).
_PRODUCTION_SECTIONS = frozenset("ABCDEF")
CONSUMER_FACING = ("G47", "I", "R_S")


def _section(code):
    return code[0].upper()


def canonical_scenario(name):
    """Map a user-facing scenario name to its canonical id."""
    key = name.replace("_", "").replace("-", "").replace(" ", "").lower()
    aliases = {
        "prelockdown": "PreLockdown",
        "lockdown": "Lockdown",
        "manufconstruction": "ManufConstruction",
        "manufacturingandconstruction": "ManufConstruction",
        "allexceptconsumerfacing": "AllExceptConsumerFacing",
        "allexceptconsumerfacingschools": "AllExceptConsumerFacingSchools",
        "open": "Open",
        "custom": "Custom",
    }
    if key not in aliases:
        raise DataValidationError(f"unknown scenario {name!r}")
    return aliases[key]


@dataclass(frozen=True)
class PolicyLambda:
    """Epidemic policy vector: on-site work share and on-site consumption
    share per industry, plus school and home-distancing switches."""

    delta_w: np.ndarray
    delta_c: np.ndarray
    delta_s: float
    delta_h: float
    scenario_id: str = "Custom"

    def __post_init__(self):
        for name in ("delta_w", "delta_c"):
            v = getattr(self, name)
            if np.any(v < 0) or np.any(v > 1):
                raise DataValidationError(f"{name} must lie in [0, 1]")
        for name in ("delta_s", "delta_h"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DataValidationError(f"{name} must lie in [0, 1]")


def open_industries(scenario_id, codes):
    """Boolean mask of industries whose supply shock is lifted at reopening."""
    codes = list(codes)
    n = len(codes)
    if scenario_id in ("PreLockdown", "Open"):
        return np.ones(n, dtype=bool)
    if scenario_id == "Lockdown":
        return np.zeros(n, dtype=bool)
    if scenario_id == "ManufConstruction":
        return np.array([_section(c) in _PRODUCTION_SECTIONS for c in codes])
    if scenario_id in ("AllExceptConsumerFacing", "AllExceptConsumerFacingSchools"):
        return np.array([c not in CONSUMER_FACING for c in codes])
    raise DataValidationError(f"scenario {scenario_id!r} has no built-in open set")


def policy_lambda(scenario_id, calib):
    """Policy vector for a named scenario.

    During lockdown only essential workers who cannot work remotely are on
    site; in every reopening scenario remote-capable workers keep working
    from home, so an opened industry's on-site share is 1 - rli."""
    scenario_id = canonical_scenario(scenario_id)
    n = calib.n
    onsite_lockdown = calib.ess_w * (1.0 - calib.rli)
    if scenario_id == "PreLockdown":
        return PolicyLambda(np.ones(n), np.ones(n), 1.0, 1.0, scenario_id)
    if scenario_id == "Lockdown":
        return PolicyLambda(onsite_lockdown, calib.ess_c.copy(), 0.0, 0.0, scenario_id)
    if scenario_id == "Open":
        return PolicyLambda(1.0 - calib.rli, np.ones(n), 1.0, 0.0, scenario_id)
    opened = open_industries(scenario_id, calib.codes)
    delta_w = np.where(opened, 1.0 - calib.rli, onsite_lockdown)
    delta_s = 1.0 if scenario_id == "AllExceptConsumerFacingSchools" else 0.0
    return PolicyLambda(delta_w, calib.ess_c.copy(), delta_s, 0.0, scenario_id)


# ---------------------------------------------------------------------------
# Shock paths
# ---------------------------------------------------------------------------

def consumption_shock_path(eps_D, onsite, t, params, reopen_day=None):
    """Demand shock for one industry at day ``t``.

    Zero before lockdown and (for industries without on-site consumption)
    after it; on-site industries recover along a slow log curve that reaches
    zero when the pandemic ends. The curve's clock starts at lockdown start
    unless ``recovery_from_reopening`` is set."""
    t_start = params.t_start_lockdown
    t_end = params.t_end_lockdown if reopen_day is None else reopen_day
    if t < t_start:
        return 0.0
    if t < t_end:
        return eps_D
    if not onsite or t >= params.t_end_pandemic:
        return 0.0
    origin = t_end if params.recovery_from_reopening else t_start
    span = params.t_end_pandemic - origin
    if span <= 0:
        raise DataValidationError("pandemic must end after the recovery clock starts")
    u = t - origin
    if u >= span:
        return 0.0
    return eps_D / math.log(100.0) * math.log(100.0 - 99.0 * u / span)


def permanent_income_factor(t, xi_L, params, xi_prev=None, in_lockdown=None):
    """Permanent-income expectation factor for day ``t``.

    1 before lockdown, the lockdown value afterwards, then an AR(1) recovery
    with a permanent drag from households expecting an L-shaped recovery."""
    if in_lockdown is None:
        in_lockdown = params.t_start_lockdown <= t <= params.t_end_lockdown
    if t < params.t_start_lockdown:
        return 1.0
    if in_lockdown:
        return xi_L
    rho = params.rho
    nu = -(1.0 - rho) * (1.0 - xi_L) * params.belief_L_share
    prev = xi_L if xi_prev is None else xi_prev
    return 1.0 - rho + rho * prev + nu


def lockdown_income_factor(economy, calib):
    """xi during lockdown from the first-order labor shock only."""
    l0 = economy.l0
    drop = float((calib.eps_S * l0).sum() / l0.sum())
    return 1.0 - 0.5 * drop


def lockdown_labor_supply(calib, scenario_id, t, params):
    """First-order labor reduction in force at day ``t`` for a scenario."""
    scenario_id = canonical_scenario(scenario_id)
    n = calib.n
    if scenario_id == "PreLockdown" or t < params.t_start_lockdown:
        return np.zeros(n)
    if scenario_id == "Lockdown" or t < params.t_end_lockdown:
        return calib.eps_S.copy()
    opened = open_industries(scenario_id, calib.codes)
    return np.where(opened, 0.0, calib.eps_S)


def other_final_demand_path(f0, f_shock, t, params, lockdown=True):
    """Other final demand: shocked from lockdown start, never lifted."""
    if not lockdown or t < params.t_start_lockdown:
        return f0.copy()
    return (1.0 - f_shock) * f0


# ---------------------------------------------------------------------------
# Schedule assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShockSchedule:
    """Per-day shock arrays for one scenario run (length horizon + 1)."""

    scenario_id: str
    eps_S: np.ndarray
    eps: np.ndarray
    f_d: np.ndarray
    xi: np.ndarray
    lockdown: np.ndarray
    nu: float
    xi_L: float


def _demand_shock_array(calib, params, T, never_reopens):
    """Vectorized demand-shock law over days 0..T-1 and all industries."""
    t = np.arange(T)[:, np.newaxis]
    eps_D = calib.eps_D[np.newaxis, :]
    in_lock = t >= params.t_start_lockdown
    if not never_reopens:
        in_lock &= t < params.t_end_lockdown
    eps = np.where(in_lock, eps_D, 0.0)
    if never_reopens:
        return eps
    origin = params.t_end_lockdown if params.recovery_from_reopening \
        else params.t_start_lockdown
    span = params.t_end_pandemic - origin
    if span <= 0:
        raise DataValidationError("pandemic must end after the recovery clock starts")
    u = np.clip(t - origin, 0, span)
    with np.errstate(divide="ignore"):
        curve = eps_D / math.log(100.0) * np.log(100.0 - 99.0 * u / span)
    recovering = (calib.onsite[np.newaxis, :]
                  & (t >= params.t_end_lockdown) & (t < params.t_end_pandemic)
                  & (t - origin < span))
    return np.where(recovering, curve, eps)


def build_schedule(economy, calib, params, scenario_id, horizon):
    """Assemble the full shock schedule for ``scenario_id``.

    The ``Lockdown`` scenario never reopens within the horizon; all other
    scenarios lift supply shocks for their open set at ``t_end_lockdown``.
    Demand shocks follow the global recovery law from the reopening day on;
    closed industries stay supply-constrained through their labor ceiling."""
    scenario_id = canonical_scenario(scenario_id)
    n = economy.n
    T = horizon + 1
    f_d = np.tile(economy.f0, (T, 1))
    xi = np.ones(T)
    lockdown = np.zeros(T, dtype=bool)
    if scenario_id == "PreLockdown":
        return ShockSchedule(scenario_id, np.zeros((T, n)), np.zeros((T, n)),
                             f_d, xi, lockdown, nu=0.0, xi_L=1.0)

    xi_L = lockdown_income_factor(economy, calib)
    nu = -(1.0 - params.rho) * (1.0 - xi_L) * params.belief_L_share
    never_reopens = scenario_id == "Lockdown"
    eps = _demand_shock_array(calib, params, T, never_reopens)
    eps_S = np.zeros((T, n))
    for t in range(T):
        in_lockdown = t >= params.t_start_lockdown and (
            never_reopens or t < params.t_end_lockdown)
        lockdown[t] = in_lockdown
        eps_S[t] = lockdown_labor_supply(calib, scenario_id, t, params)
        f_d[t] = other_final_demand_path(economy.f0, calib.f_shock, t, params)
        if t < params.t_start_lockdown:
            xi[t] = 1.0
        elif in_lockdown:
            xi[t] = xi_L
        else:
            xi[t] = permanent_income_factor(t, xi_L, params, xi_prev=xi[t - 1],
                                            in_lockdown=False)
    return ShockSchedule(scenario_id, eps_S, eps, f_d, xi, lockdown,
                         nu=nu, xi_L=xi_L)


def custom_schedule(economy, calib, params, open_mask, horizon):
    """Schedule for a custom open set (reopened at ``t_end_lockdown``)."""
    open_mask = np.asarray(open_mask, dtype=bool)
    if open_mask.shape != (economy.n,):
        raise DataValidationError("open mask length does not match the economy")
    base = build_schedule(economy, calib, params, "AllExceptConsumerFacing", horizon)
    eps_S = base.eps_S.copy()
    for t in range(params.t_end_lockdown, horizon + 1):
        eps_S[t] = np.where(open_mask, 0.0, calib.eps_S)
    return ShockSchedule("Custom", eps_S, base.eps, base.f_d, base.xi,
                         base.lockdown, nu=base.nu, xi_L=base.xi_L)


def custom_policy_lambda(calib, open_mask, delta_s=0.0, delta_h=0.0,
                         open_consumption=False, delta_w_overrides=None,
                         delta_c_overrides=None):
    """Policy vector for a custom scenario (used by the service layer)."""
    open_mask = np.asarray(open_mask, dtype=bool)
    onsite_lockdown = calib.ess_w * (1.0 - calib.rli)
    delta_w = np.where(open_mask, 1.0 - calib.rli, onsite_lockdown)
    delta_c = np.ones(calib.n) if open_consumption else calib.ess_c.copy()
    if delta_w_overrides:
        delta_w = delta_w.copy()
        for code, value in delta_w_overrides.items():
            delta_w[calib.codes.index(code)] = value
    if delta_c_overrides:
        delta_c = delta_c.copy()
        for code, value in delta_c_overrides.items():
            delta_c[calib.codes.index(code)] = value
    return PolicyLambda(delta_w, delta_c, float(delta_s), float(delta_h), "Custom")
