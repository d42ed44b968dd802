"""Activity-decomposed transmission rate and reproduction number.

The transmission rate splits into work, school, consumption, transport and
home channels, each scaled by the policy vector; the shares are calibrated
from intensity-weighted contact data and sum to one in the fully open
economy. Reproduction numbers are reported both raw (anchored to the
pre-lockdown estimate) and rescaled so the lockdown scenario matches an
external lockdown estimate. A fixed-step SIR integrator is included for
validation only.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import DataValidationError, read_config
from .shocks import PolicyLambda, policy_lambda

logger = logging.getLogger(__name__)

CATEGORIES = ("work", "school", "consume", "transport", "home")

# Consumption-contact places map to one industry each: stores to retail,
# restaurants to accommodation-food, sports venues to other services.
_CONSUME_PLACE_INDUSTRY = {
    "Convenience store": "G47",
    "Large store": "G47",
    "Restaurant": "I",
    "Sports venue": "R_S",
}


@dataclass(frozen=True)
class PlaceContactTable:
    """Rows of (place, category, visit likelihood %, duration h, median
    crowd, physical-contact %)."""

    places: tuple
    categories: tuple
    visit: np.ndarray
    duration: np.ndarray
    crowd: np.ndarray
    physical: np.ndarray

    def __post_init__(self):
        for arr in (self.visit, self.duration, self.crowd, self.physical):
            if np.any(arr < 0):
                raise DataValidationError("contact table entries must be non-negative")
        unknown = set(self.categories) - set(CATEGORIES)
        if unknown:
            raise DataValidationError(f"unknown contact categories {sorted(unknown)}")

    def intensity(self):
        """Intensity share per place: visit x duration x crowd, normalized."""
        raw = self.visit * self.duration * self.crowd
        total = raw.sum()
        if total <= 0:
            raise DataValidationError("contact table has zero total intensity")
        return raw / total


def load_places(path):
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return PlaceContactTable(
        places=tuple(r["place"] for r in rows),
        categories=tuple(r["category"] for r in rows),
        visit=np.array([float(r["visit_pct"]) for r in rows]),
        duration=np.array([float(r["duration_hours"]) for r in rows]),
        crowd=np.array([float(r["crowd"]) for r in rows]),
        physical=np.array([float(r["physical_pct"]) for r in rows]),
    )


def intensity_weights(table):
    """Per-category shares of intensity-weighted contacts (the beta0 split)."""
    shares = table.intensity()
    out = {}
    for cat in CATEGORIES:
        mask = np.array([c == cat for c in table.categories])
        if not mask.any():
            raise DataValidationError(f"contact table has no {cat!r} rows")
        out[cat] = float(shares[mask].sum())
    return out


def consumption_weights(table, codes):
    """Industry consumption-contact weights b_c from the consume rows."""
    shares = table.intensity()
    consume_mask = np.array([c == "consume" for c in table.categories])
    total = shares[consume_mask].sum()
    b_c = np.zeros(len(codes))
    for k, place in enumerate(table.places):
        if not consume_mask[k]:
            continue
        industry = _CONSUME_PLACE_INDUSTRY.get(place)
        if industry is None or industry not in codes:
            raise DataValidationError(
                f"no industry mapping for consumption place {place!r}")
        b_c[codes.index(industry)] += shares[k] / total
    return b_c


def industry_work_risk(exposure, proximity):
    """Workplace infection-risk weight: mean of the exposure-to-infection and
    physical-proximity indices (0-100 scales)."""
    exposure = np.asarray(exposure, dtype=float)
    proximity = np.asarray(proximity, dtype=float)
    for name, v in (("exposure", exposure), ("proximity", proximity)):
        if np.any(v < 0) or np.any(v > 100):
            raise DataValidationError(f"{name} index outside [0, 100]")
    return 0.5 * (exposure + proximity)


def normalized_work_risk(b_w):
    """b_w normalized to sum one (reporting convention)."""
    return b_w / b_w.sum()


@dataclass(frozen=True)
class EpiCalibration:
    """Calibrated inputs of the transmission-rate decomposition."""

    codes: tuple
    beta0: dict
    b_w: np.ndarray
    b_c: np.ndarray
    eta: np.ndarray
    eta_s: float
    eta_u: float
    g: float
    kappa: float
    r0_pre: float
    r0_pre_sd: float
    r0_lockdown_anchor: float
    gamma_rec: float

    def __post_init__(self):
        if abs(sum(self.beta0.values()) - 1.0) > 1e-12:
            raise DataValidationError("beta0 shares must sum to one")
        if abs(self.eta_s + self.eta_u + self.eta.sum() - 1.0) > 1e-9:
            raise DataValidationError("population shares must sum to one")
        if abs(self.b_c.sum() - 1.0) > 1e-9:
            raise DataValidationError("consumption weights must sum to one")
        if np.any(self.b_w < 0) or np.any(self.eta < 0) or np.any(self.b_c < 0):
            raise DataValidationError("negative epidemic weights")


def load_epi_calibration(industry_path, places_path, params_path, codes=None):
    """Assemble :class:`EpiCalibration` from the three bundled files."""
    with Path(industry_path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    file_codes = [r["code"].strip() for r in rows]
    if codes is not None and list(codes) != file_codes:
        raise DataValidationError("epidemic industry codes do not match the io table")
    exposure = np.array([float(r["exposure"]) for r in rows])
    proximity = np.array([float(r["proximity"]) for r in rows])
    eta = np.array([float(r["eta"]) for r in rows])

    table = load_places(places_path)
    beta0 = intensity_weights(table)
    if rows and "b_c" in rows[0]:
        b_c = np.array([float(r["b_c"]) for r in rows])
        b_c = b_c / b_c.sum()
    else:
        b_c = consumption_weights(table, file_codes)

    cfg = read_config(params_path)
    eta_s = float(cfg.get("eta_s", 0.23))
    return EpiCalibration(
        codes=tuple(file_codes),
        beta0=beta0,
        b_w=industry_work_risk(exposure, proximity),
        b_c=b_c,
        eta=eta,
        eta_s=eta_s,
        eta_u=1.0 - eta_s - float(eta.sum()),
        g=float(cfg.get("g", 17.0 / 23.0)),
        kappa=float(cfg.get("kappa", 0.76)),
        r0_pre=float(cfg.get("r0_pre", 2.6)),
        r0_pre_sd=float(cfg.get("r0_pre_sd", 0.54)),
        r0_lockdown_anchor=float(cfg.get("r0_lockdown_anchor", 0.62)),
        gamma_rec=float(cfg.get("gamma_rec", 1.0 / 7.0)),
    )


def synthetic_epi_calibration(economy, seed=0, eta_s=0.23, working_share=0.62):
    """Plausible epidemic calibration for a synthetic economy."""
    rng = np.random.default_rng(seed)
    n = economy.n
    eta = economy.l0 / economy.l0.sum() * working_share
    b_c = economy.c0 / economy.c0.sum()
    beta0 = {"work": 0.29, "school": 0.28, "consume": 0.16, "transport": 0.06,
             "home": 0.21}
    return EpiCalibration(
        codes=economy.codes, beta0=beta0,
        b_w=industry_work_risk(rng.uniform(5, 95, n), rng.uniform(20, 90, n)),
        b_c=b_c, eta=eta, eta_s=eta_s, eta_u=1.0 - eta_s - working_share,
        g=17.0 / 23.0, kappa=0.76, r0_pre=2.6, r0_pre_sd=0.54,
        r0_lockdown_anchor=0.62, gamma_rec=1.0 / 7.0)


# ---------------------------------------------------------------------------
# Transmission rate and R0
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BetaBreakdown:
    """Transmission-rate shares by activity; sums to one when fully open."""

    work: float
    school: float
    consumption: float
    transport: float
    home: float
    r0: float = float("nan")
    r0_sd: float = float("nan")

    @property
    def total(self):
        return self.work + self.school + self.consumption + self.transport + self.home

    def to_dict(self):
        return {"work": self.work, "school": self.school,
                "consumption": self.consumption, "transport": self.transport,
                "home": self.home, "total": self.total,
                "r0": self.r0, "r0_sd": self.r0_sd}


def school_attendance(lam, calib, adult_norm=False):
    """Fraction of the student population attending school.

    With schools partially closed only children (a share g of students) of
    on-site workers attend. ``adult_norm`` switches to normalizing the
    working term by the worker population share."""
    working = float((lam.delta_w * calib.eta).sum())
    if adult_norm:
        working /= float(calib.eta.sum())
    return lam.delta_s + (1.0 - lam.delta_s) * calib.g * working


def beta_total(lam, calib, adult_norm=False):
    """Transmission-rate breakdown for a policy vector."""
    denom_w = float((calib.eta * calib.b_w).sum())
    if denom_w <= 0:
        raise DataValidationError("work-risk normalization is zero")
    commuters0 = calib.eta_s + float(calib.eta.sum())
    if commuters0 <= 0:
        raise DataValidationError("no commuting population in calibration")
    mu_s = school_attendance(lam, calib, adult_norm=adult_norm)
    work = calib.beta0["work"] * float((lam.delta_w * calib.eta * calib.b_w).sum()) / denom_w
    school = calib.beta0["school"] * mu_s
    consumption = calib.beta0["consume"] * float((lam.delta_c * calib.b_c).sum())
    commuters = mu_s * calib.eta_s + float((lam.delta_w * calib.eta).sum())
    transport = calib.beta0["transport"] * (commuters / commuters0) ** 2
    home = calib.beta0["home"] * ((1.0 - lam.delta_h) * calib.kappa + lam.delta_h)
    bb = BetaBreakdown(work=work, school=school, consumption=consumption,
                       transport=transport, home=home)
    r0 = calib.r0_pre * bb.total
    return BetaBreakdown(work=work, school=school, consumption=consumption,
                         transport=transport, home=home, r0=r0, r0_sd=0.2 * r0)


@dataclass(frozen=True)
class R0Estimate:
    """Rescaled reproduction number (anchored to the external lockdown
    estimate) plus the raw model value."""

    r0: float
    r0_sd: float
    r0_unrescaled: float
    r0_unrescaled_sd: float
    breakdown: BetaBreakdown

    def __iter__(self):
        return iter((self.r0, self.r0_sd))


def r0_estimate(lam, calib, pandemic_calib, adult_norm=False):
    """Reproduction number for a policy vector.

    The rescaled value anchors the lockdown scenario exactly to the external
    lockdown estimate; the unrescaled value is the pre-lockdown estimate
    scaled by the total transmission share. One standard error is 20% of the
    mean."""
    bb = beta_total(lam, calib, adult_norm=adult_norm)
    lock = beta_total(policy_lambda("Lockdown", pandemic_calib), calib,
                      adult_norm=adult_norm)
    if lock.total <= 0:
        raise DataValidationError("lockdown transmission share is zero")
    unrescaled = calib.r0_pre * bb.total
    rescaled = calib.r0_lockdown_anchor * bb.total / lock.total
    return R0Estimate(r0=rescaled, r0_sd=0.2 * rescaled,
                      r0_unrescaled=unrescaled, r0_unrescaled_sd=0.2 * unrescaled,
                      breakdown=bb)


def workforce_shares(calib, eta):
    """Employment-weighted essential / remote-capable / on-site shares."""
    eta = np.asarray(eta, dtype=float)
    total = eta.sum()
    onsite = calib.ess_w * (1.0 - calib.rli)
    return {
        "essential": float((calib.ess_w * eta).sum() / total),
        "remote": float((calib.rli * eta).sum() / total),
        "onsite": float((onsite * eta).sum() / total),
    }


# ---------------------------------------------------------------------------
# SIR validation integrator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SirSeries:
    t: np.ndarray
    S: np.ndarray
    I: np.ndarray
    R: np.ndarray

    @property
    def population(self):
        return self.S + self.I + self.R


def sir_integrate(beta, gamma_rec, s0, i0, r0_init, horizon, dt=0.1):
    """Forward-Euler integration of the SIR equations.

    Step increments cancel algebraically, so total population is conserved
    to float accuracy. ``dt`` is chosen for accuracy; the default 0.1 day
    keeps the early growth rate within a fraction of a percent."""
    if min(s0, i0, r0_init) < 0:
        raise DataValidationError("negative initial population")
    if dt <= 0 or horizon < 0:
        raise DataValidationError("need positive dt and non-negative horizon")
    M = float(s0 + i0 + r0_init)
    if M <= 0:
        raise DataValidationError("empty population")
    steps = int(round(horizon / dt))
    t = np.empty(steps + 1)
    S = np.empty(steps + 1)
    I = np.empty(steps + 1)
    R = np.empty(steps + 1)
    S[0], I[0], R[0] = float(s0), float(i0), float(r0_init)
    t[0] = 0.0
    for k in range(steps):
        new_inf = beta * S[k] * I[k] / M
        recov = gamma_rec * I[k]
        S[k + 1] = S[k] - dt * new_inf
        I[k + 1] = I[k] + dt * (new_inf - recov)
        R[k + 1] = R[k] + dt * recov
        t[k + 1] = (k + 1) * dt
    return SirSeries(t=t, S=S, I=I, R=R)
