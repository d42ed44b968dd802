"""Daily simulation engine.

Each day runs five phases: labor adjustment (on yesterday's binding
constraints), demand formation (household consumption and intermediate
orders), constrained production (labor capacity and input bottlenecks),
pro-rata rationing of scarce output, and inventory/accounting updates.
A step is fully deterministic; identical inputs give bit-identical states.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace

import numpy as np

from .data import DataValidationError

logger = logging.getLogger(__name__)


class NumericalError(RuntimeError):
    """Raised when the engine produces non-finite state."""


@dataclass
class SimState:
    """Full mutable daily state. ``S[i, j]`` is industry ``j``'s stock of
    input ``i``; ``x_cap``/``x_inp``/``d`` record the day's binding
    constraints for next-day labor decisions.

    ``l_emp`` is payroll employment, which firms adjust slowly by hiring and
    firing; ``l`` is the labor actually working (and compensated), i.e.
    payroll capped by the lockdown ceiling. Workers between the two are
    furloughed: they return instantly once their industry reopens."""

    t: int
    S: np.ndarray
    l: np.ndarray
    l_emp: np.ndarray
    l_max: np.ndarray
    d_prev: np.ndarray
    O: np.ndarray
    c_d: np.ndarray
    f_d: np.ndarray
    c_tilde_d: float
    xi: float
    theta: np.ndarray
    x: np.ndarray
    c: np.ndarray
    f: np.ndarray
    Z: np.ndarray
    pi: np.ndarray
    l_star: float
    x_cap: np.ndarray
    x_inp: np.ndarray
    d: np.ndarray

    def copy(self):
        return replace(
            self, S=self.S.copy(), l=self.l.copy(), l_emp=self.l_emp.copy(),
            l_max=self.l_max.copy(),
            d_prev=self.d_prev.copy(), O=self.O.copy(), c_d=self.c_d.copy(),
            f_d=self.f_d.copy(), theta=self.theta.copy(), x=self.x.copy(),
            c=self.c.copy(), f=self.f.copy(), Z=self.Z.copy(), pi=self.pi.copy(),
            x_cap=self.x_cap.copy(), x_inp=self.x_inp.copy(), d=self.d.copy())


@dataclass
class SimSeries:
    """Per-day recording of a run: aggregates plus per-industry output,
    labor, consumption and other final demand. Day 0 is the steady state."""

    codes: tuple
    days: np.ndarray
    x_tot: np.ndarray
    l_tot: np.ndarray
    pi_tot: np.ndarray
    c_tot: np.ndarray
    c_d_tot: np.ndarray
    va_tot: np.ndarray
    xi: np.ndarray
    x: np.ndarray
    l: np.ndarray
    c: np.ndarray
    f: np.ndarray

    def __len__(self):
        return len(self.days)

    def head(self, horizon):
        """First ``horizon + 1`` days as a new series."""
        n = min(horizon + 1, len(self.days))
        return SimSeries(codes=self.codes, days=self.days[:n],
                         x_tot=self.x_tot[:n], l_tot=self.l_tot[:n],
                         pi_tot=self.pi_tot[:n], c_tot=self.c_tot[:n],
                         c_d_tot=self.c_d_tot[:n], va_tot=self.va_tot[:n],
                         xi=self.xi[:n], x=self.x[:n], l=self.l[:n],
                         c=self.c[:n], f=self.f[:n])

    def to_csv(self, path):
        import csv
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x_tot", "l_tot", "pi_tot", "c_tot", "c_d_tot",
                        "va_tot", "xi"] + [f"x_{c}" for c in self.codes])
            for k in range(len(self.days)):
                w.writerow([int(self.days[k])]
                           + [repr(float(v)) for v in
                              (self.x_tot[k], self.l_tot[k], self.pi_tot[k],
                               self.c_tot[k], self.c_d_tot[k], self.va_tot[k],
                               self.xi[k])]
                           + [repr(float(v)) for v in self.x[k]])

    def to_dict(self):
        return {
            "codes": list(self.codes),
            "days": self.days.tolist(),
            "aggregates": {
                "x_tot": self.x_tot.tolist(),
                "l_tot": self.l_tot.tolist(),
                "pi_tot": self.pi_tot.tolist(),
                "c_tot": self.c_tot.tolist(),
                "c_d_tot": self.c_d_tot.tolist(),
                "va_tot": self.va_tot.tolist(),
                "xi": self.xi.tolist(),
            },
            "industries": {
                "x": self.x.tolist(),
                "l": self.l.tolist(),
                "c": self.c.tolist(),
                "f": self.f.tolist(),
            },
        }

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)


# ---------------------------------------------------------------------------
# Elementary operations
# ---------------------------------------------------------------------------

def total_consumption_demand(prev, l_star, l0_tilde, xi, eps_tilde, params):
    """Aggregate household consumption demand for the day.

    The default (muellbauer) form is a log AR(1) onto the mean of current and
    expected permanent income, less the aggregate demand-shock term."""
    if params.cons_fn == "fixed":
        return params.m * l0_tilde
    if params.cons_fn == "keynesian":
        return params.m * l_star
    if l_star <= 0 or xi <= 0 or prev <= 0:
        raise NumericalError("non-positive income or consumption in log consumption rule")
    rho = params.rho
    log_c = (rho * np.log(prev)
             + 0.5 * (1.0 - rho) * np.log(params.m * l_star)
             + 0.5 * (1.0 - rho) * np.log(params.m * xi * l0_tilde)
             - eps_tilde)
    return float(np.exp(log_c))


def preference_shares(theta0, eps_t, delta_s_save, rho):
    """Shocked consumption preference shares and the aggregate shock term.

    Applies the demand-shock vector to the baseline shares, renormalizes to
    sum one, and returns the saving-adjusted aggregate reduction."""
    theta_bar = theta0 * (1.0 - eps_t)
    total = theta_bar.sum()
    if total <= 0:
        raise DataValidationError("demand shocks wipe out all consumption preferences")
    eps_tilde = delta_s_save * (1.0 - total) * (1.0 - rho)
    return theta_bar / total, float(eps_tilde)


def intermediate_orders(S, d_prev, economy, targets, params):
    """Orders O[i, j]: replacement demand plus inventory-gap closure, floored
    at zero (negative orders are not meaningful transactions)."""
    target_stock = targets.n_days[np.newaxis, :] * economy.Z0
    O = economy.A * d_prev[np.newaxis, :] + (target_stock - S) / params.tau
    return np.maximum(O, 0.0)


def capacity_limit(l, economy):
    """Labor-constrained production capacity (linear in employed labor)."""
    l0, x0 = economy.l0, economy.x0
    if np.any((l0 == 0) & (x0 > 0)):
        raise DataValidationError("industry with output but zero baseline labor")
    with np.errstate(divide="ignore", invalid="ignore"):
        cap = np.where(l0 > 0, l / np.where(l0 > 0, l0, 1.0) * x0, 0.0)
    return cap


def input_limit(S, economy, criticality, mode):
    """Input-bottleneck production limit per industry.

    ``leontief`` treats every used input as binding; ``linear`` pools all
    stocks; the criticality modes restrict the minimum to rated inputs, with
    ``important_half`` letting production scale half-proportionally to
    important-input availability. Industries with no constraining inputs are
    unconstrained (+inf)."""
    A = economy.A
    with np.errstate(divide="ignore", invalid="ignore"):
        per_input = np.where(A > 0, S / np.where(A > 0, A, 1.0), np.inf)

    if mode == "linear":
        tot_A = A.sum(axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(tot_A > 0, S.sum(axis=0) / np.where(tot_A > 0, tot_A, 1.0),
                            np.inf)
    if mode == "leontief":
        return per_input.min(axis=0)

    ratings = criticality.ratings
    if mode == "critical_baseline":
        constrained = np.where((ratings == 1.0) & (A > 0), per_input, np.inf)
        return constrained.min(axis=0)
    if mode == "important_critical":
        constrained = np.where((ratings >= 0.5) & (A > 0), per_input, np.inf)
        return constrained.min(axis=0)
    if mode == "important_half":
        crit = np.where((ratings == 1.0) & (A > 0), per_input, np.inf).min(axis=0)
        half = 0.5 * (per_input + economy.x0[np.newaxis, :])
        imp = np.where((ratings == 0.5) & (A > 0), half, np.inf).min(axis=0)
        return np.minimum(crit, imp)
    raise DataValidationError(f"unknown production function {mode!r}")


def realize_and_ration(O, c_d, f_d, x_cap, x_inp, d):
    """Realized output and pro-rata deliveries.

    Output is the least of capacity, input limit and demand; every customer
    receives the same share x/d of its order (zero-demand industries deliver
    nothing)."""
    if np.any(c_d < -1e-12) or np.any(f_d < -1e-12) or np.any(O < 0):
        raise DataValidationError("negative demand components")
    x = np.minimum(np.minimum(x_cap, x_inp), d)
    x = np.maximum(x, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(d > 0, x / np.where(d > 0, d, 1.0), 0.0)
    x = np.where(d > 0, x, 0.0)
    Z = O * ratio[:, np.newaxis]
    c = c_d * ratio
    f = f_d * ratio
    return x, Z, c, f


def usage_binding_mask(criticality, economy, mode):
    """Inputs consumed strictly by recipe (never capped by stock) per mode."""
    A_pos = economy.A > 0
    if mode == "leontief":
        return A_pos
    if mode == "linear":
        return np.zeros_like(A_pos)
    ratings = criticality.ratings
    if mode == "important_critical":
        return (ratings >= 0.5) & A_pos
    # critical_baseline and important_half: only rated-critical inputs bind.
    return (ratings == 1.0) & A_pos


def consume_inputs_and_update_inventories(S, Z, x, economy, binding_mask):
    """Recipe usage (stock-capped for non-binding inputs) and stock update.

    Returns the new stocks and the usage matrix (input i consumed by
    industry j); usage, not deliveries, is what production expenses."""
    required = economy.A * x[np.newaxis, :]
    usage = np.where(binding_mask, required, np.minimum(required, S))
    return np.maximum(S + Z - usage, 0.0), usage


def labor_adjustment(l_emp, l0, x0, x_cap, x_inp, d, params):
    """One hiring/firing step of payroll employment toward the level implied
    by yesterday's binding constraint. Payroll never exceeds the baseline
    workforce."""
    target_gap = np.minimum(x_inp, d) - x_cap
    with np.errstate(invalid="ignore"):
        delta = np.where(x0 > 0, l0 / np.where(x0 > 0, x0, 1.0) * target_gap, 0.0)
    delta = np.where(np.isfinite(delta), delta, 0.0)
    rate = np.where(delta >= 0, params.gamma_H, params.gamma_F)
    return np.clip(l_emp + rate * delta, 0.0, l0)


def household_income(l_tilde, l0_tilde, b):
    """Disposable labor income including benefits covering a fraction ``b``
    of the income loss."""
    return l_tilde + b * (l0_tilde - l_tilde)


# ---------------------------------------------------------------------------
# Initialization and stepping
# ---------------------------------------------------------------------------

def init_steady_state(economy, targets, params):
    """State at day 0: inventories at target, full employment, demand equal
    to output. With zero shocks one engine step reproduces it exactly."""
    n = economy.n
    l0_tilde = float(economy.l0.sum())
    c0_tilde = float(economy.c0.sum())
    if c0_tilde <= 0 or l0_tilde <= 0:
        raise DataValidationError("steady state needs positive consumption and labor")
    if abs(params.m * l0_tilde - c0_tilde) / c0_tilde > 1e-6:
        logger.warning(
            "m * total labor income (%.6g) differs from total consumption (%.6g); "
            "the initial state will not be an exact fixed point",
            params.m * l0_tilde, c0_tilde)
    S = targets.n_days[np.newaxis, :] * economy.Z0
    theta0 = economy.c0 / c0_tilde
    state = SimState(
        t=0,
        S=S,
        l=economy.l0.copy(),
        l_emp=economy.l0.copy(),
        l_max=economy.l0.copy(),
        d_prev=economy.x0.copy(),
        O=economy.Z0.copy(),
        c_d=economy.c0.copy(),
        f_d=economy.f0.copy(),
        c_tilde_d=params.m * l0_tilde,
        xi=1.0,
        theta=theta0.copy(),
        x=economy.x0.copy(),
        c=economy.c0.copy(),
        f=economy.f0.copy(),
        Z=economy.Z0.copy(),
        pi=economy.pi0.copy(),
        l_star=l0_tilde,
        x_cap=economy.x0.copy(),
        x_inp=np.full(n, np.inf),
        d=economy.x0.copy(),
    )
    return state


@dataclass(frozen=True)
class _StepCache:
    """Loop-invariant quantities shared by every step of one run."""

    theta0: np.ndarray
    l0_tilde: float
    binding: np.ndarray
    value_share: np.ndarray
    target_stock: np.ndarray

    @classmethod
    def build(cls, economy, criticality, targets, params):
        with np.errstate(invalid="ignore"):
            e_share = np.where(economy.x0 > 0, economy.e0 / economy.x0, 0.0)
        return cls(theta0=economy.c0 / economy.c0.sum(),
                   l0_tilde=float(economy.l0.sum()),
                   binding=usage_binding_mask(criticality, economy,
                                              params.prod_fn),
                   value_share=1.0 - economy.A.sum(axis=0) - e_share,
                   target_stock=targets.n_days[np.newaxis, :] * economy.Z0)


def step(state, economy, criticality, targets, params, schedule, cache=None):
    """Advance one day. Reads day-(t+1) shocks from the schedule."""
    if cache is None:
        cache = _StepCache.build(economy, criticality, targets, params)
    t = state.t + 1
    eps_S_t = schedule.eps_S[t]
    eps_t = schedule.eps[t]
    f_d = schedule.f_d[t].copy()
    xi = float(schedule.xi[t])
    theta0 = cache.theta0
    l0_tilde = cache.l0_tilde

    # 1. Hiring/firing of payroll from yesterday's binding constraints;
    #    the lockdown ceiling furloughs the excess for the day.
    l_max = (1.0 - eps_S_t) * economy.l0
    l_emp = labor_adjustment(state.l_emp, economy.l0, economy.x0, state.x_cap,
                             state.x_inp, state.d, params)
    l = np.minimum(l_emp, l_max)

    # 2. Demand formation.
    theta, eps_tilde = preference_shares(theta0, eps_t, params.delta_s_save, params.rho)
    l_tilde = float(l.sum())
    l_star = household_income(l_tilde, l0_tilde, params.b)
    c_tilde_d = total_consumption_demand(state.c_tilde_d, l_star, l0_tilde, xi,
                                         eps_tilde, params)
    c_d = theta * c_tilde_d
    O = np.maximum(economy.A * state.d_prev[np.newaxis, :]
                   + (cache.target_stock - state.S) / params.tau, 0.0)
    d = O.sum(axis=1) + c_d + f_d

    # 3. Production constraints.
    x_cap = capacity_limit(l, economy)
    x_inp = input_limit(state.S, economy, criticality, params.prod_fn)

    # 4. Realized production and pro-rata rationing.
    x, Z, c, f = realize_and_ration(O, c_d, f_d, x_cap, x_inp, d)

    # 5. Inventories, profits, household income. Profits expense
    #    intermediate inputs at recipe prices (A'x): restocking purchases are
    #    inventory investment, and production that runs down stocks of
    #    non-critical inputs is not a windfall.
    S, _usage = consume_inputs_and_update_inventories(state.S, Z, x, economy,
                                                      cache.binding)
    pi = x * cache.value_share - l

    if not (np.isfinite(x).all() and np.isfinite(S).all() and np.isfinite(pi).all()):
        raise NumericalError(f"non-finite state at day {t}")

    return SimState(t=t, S=S, l=l, l_emp=l_emp, l_max=l_max, d_prev=d, O=O,
                    c_d=c_d, f_d=f_d, c_tilde_d=c_tilde_d, xi=xi, theta=theta,
                    x=x, c=c, f=f, Z=Z, pi=pi, l_star=l_star, x_cap=x_cap,
                    x_inp=x_inp, d=d)


def run_simulation(economy, criticality, targets, params, schedule, horizon):
    """Run ``horizon`` days from the steady state and record the series."""
    if horizon < 0:
        raise DataValidationError("horizon must be non-negative")
    if len(schedule.eps_S) < horizon + 1:
        raise DataValidationError("shock schedule shorter than the horizon")
    n = economy.n
    days = np.arange(horizon + 1)
    rec = {name: np.empty(horizon + 1) for name in
           ("x_tot", "l_tot", "pi_tot", "c_tot", "c_d_tot", "va_tot", "xi")}
    x_series = np.empty((horizon + 1, n))
    l_series = np.empty((horizon + 1, n))
    c_series = np.empty((horizon + 1, n))
    f_series = np.empty((horizon + 1, n))

    state = init_steady_state(economy, targets, params)
    cache = _StepCache.build(economy, criticality, targets, params)
    for k in range(horizon + 1):
        if k > 0:
            state = step(state, economy, criticality, targets, params, schedule,
                         cache=cache)
        rec["x_tot"][k] = state.x.sum()
        rec["l_tot"][k] = state.l.sum()
        rec["pi_tot"][k] = state.pi.sum()
        rec["c_tot"][k] = state.c.sum()
        rec["c_d_tot"][k] = state.c_d.sum()
        rec["va_tot"][k] = state.pi.sum() + state.l.sum()
        rec["xi"][k] = state.xi
        x_series[k] = state.x
        l_series[k] = state.l
        c_series[k] = state.c
        f_series[k] = state.f

    return SimSeries(codes=economy.codes, days=days, x=x_series, l=l_series,
                     c=c_series, f=f_series, **rec)
