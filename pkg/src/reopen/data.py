"""Input datasets: the input-output snapshot, input-criticality ratings,
pandemic shock calibration, inventory coverage targets and model parameters.

All loaders validate invariants up front and return immutable-by-convention
objects; simulation code never mutates them. File formats are plain CSV /
flat key-value config so datasets can be swapped without touching code.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

ACCOUNTING_RTOL = 1e-9

PROD_FUNCTIONS = ("leontief", "linear", "critical_baseline",
                  "important_critical", "important_half")
CONS_FUNCTIONS = ("muellbauer", "keynesian", "fixed")

RETAIL_CODE = "G47"

# Industries whose household demand recovers along the slow post-lockdown
# curve (on-site consumption).
ONSITE_CODES = ("G45", "G47", "H49", "H50", "H51", "H52", "H53", "I",
                "L68", "M69_M70", "O84", "P85", "R_S", "T")


class DataValidationError(ValueError):
    """Raised when an input dataset violates a structural invariant."""


def _as_float_vector(values, n, name):
    arr = np.asarray(values, dtype=float)
    if arr.shape != (n,):
        raise DataValidationError(f"{name}: expected {n} values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataValidationError(f"{name}: non-finite entries")
    return arr


# ---------------------------------------------------------------------------
# Economy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Economy:
    """Calibrated input-output snapshot.

    ``Z0[i, j]`` is the monetary flow from supplier ``i`` to buyer ``j`` per
    day. ``A`` holds technical coefficients (``Z0[i, j] / x0[j]``), ``B``
    allocation coefficients (``Z0[i, j] / x0[i]``). ``pi0`` is the per-industry
    profit residual; no sign constraint applies to it.
    """

    codes: tuple
    Z0: np.ndarray
    x0: np.ndarray
    c0: np.ndarray
    f0: np.ndarray
    l0: np.ndarray
    e0: np.ndarray
    A: np.ndarray
    B: np.ndarray
    pi0: np.ndarray
    accounting_warnings: tuple = ()

    @property
    def n(self):
        return len(self.codes)

    def index(self, code):
        return self.codes.index(code)

    @property
    def value_added0(self):
        return self.pi0 + self.l0


def make_economy(codes, Z0, x0, c0, f0, l0, e0=None, pi0=None, strict=False):
    """Assemble and validate an :class:`Economy` from raw vectors.

    Exactly one of ``e0`` / ``pi0`` may be omitted; the missing one is
    computed as the residual of the profit identity. Accounting-identity
    violations are collected as warnings unless ``strict`` is set.
    """
    codes = tuple(str(c) for c in codes)
    n = len(codes)
    if len(set(codes)) != n:
        raise DataValidationError("duplicate industry codes")
    Z0 = np.asarray(Z0, dtype=float)
    if Z0.shape != (n, n):
        raise DataValidationError(f"flow matrix must be {n}x{n}, got {Z0.shape}")
    if np.any(Z0 < 0):
        raise DataValidationError("negative intermediate flows")
    x0 = _as_float_vector(x0, n, "x0")
    c0 = _as_float_vector(c0, n, "c0")
    f0 = _as_float_vector(f0, n, "f0")
    l0 = _as_float_vector(l0, n, "l0")
    if np.any(x0 <= 0):
        raise DataValidationError("gross output must be strictly positive")
    if np.any(c0 < 0) or np.any(f0 < 0) or np.any(l0 < 0):
        raise DataValidationError("negative consumption, final demand or labor")

    purchases = Z0.sum(axis=0)
    if e0 is None and pi0 is None:
        raise DataValidationError("need other expenses e0 or profits pi0")
    if e0 is not None:
        e0 = _as_float_vector(e0, n, "e0")
        pi0 = x0 - purchases - l0 - e0
    else:
        pi0 = _as_float_vector(pi0, n, "pi0")
        e0 = x0 - purchases - l0 - pi0

    warnings = []
    resid = np.abs(x0 - Z0.sum(axis=1) - c0 - f0) / x0
    bad = np.where(resid > ACCOUNTING_RTOL)[0]
    for i in bad:
        warnings.append(f"{codes[i]}: accounting residual {resid[i]:.3e}")
    if warnings and strict:
        raise DataValidationError("accounting identity violated: " + "; ".join(warnings))
    for msg in warnings:
        logger.warning("io table: %s", msg)

    A = Z0 / x0[np.newaxis, :]
    B = Z0 / x0[:, np.newaxis]
    colsum = A.sum(axis=0)
    if np.any(colsum >= 1.0):
        j = int(np.argmax(colsum))
        raise DataValidationError(
            f"technical-coefficient column sum >= 1 for {codes[j]} ({colsum[j]:.4f}); "
            "economy is not productive")
    return Economy(codes=codes, Z0=Z0, x0=x0, c0=c0, f0=f0, l0=l0, e0=e0,
                   A=A, B=B, pi0=pi0, accounting_warnings=tuple(warnings))


def load_io_table(path, format="native_csv", strict=False):
    """Load an economy from ``io_table.csv``.

    Layout: header row of industry codes, N labelled flow rows, then labelled
    rows ``x``, ``c``, ``f``, ``l``, ``e``. ``wiod_csv`` is accepted as an
    alias for the same layout (codes follow the WIOD convention).
    """
    if format not in ("native_csv", "wiod_csv"):
        raise DataValidationError(f"unknown io table format {format!r}")
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataValidationError(f"{path}: empty file")
    codes = [c.strip() for c in rows[0][1:]]
    n = len(codes)
    if len(rows) != n + 6:
        raise DataValidationError(
            f"{path}: expected {n} flow rows plus x,c,f,l,e; got {len(rows) - 1} data rows")
    body = {}
    Z = np.zeros((n, n))
    for k, row in enumerate(rows[1:]):
        label = row[0].strip()
        vals = np.array([float(v) for v in row[1:]], dtype=float)
        if vals.shape != (n,):
            raise DataValidationError(f"{path}: row {label!r} has {len(vals)} values, want {n}")
        if k < n:
            if label != codes[k]:
                raise DataValidationError(
                    f"{path}: flow row {k} labelled {label!r}, expected {codes[k]!r}")
            Z[k] = vals
        else:
            body[label] = vals
    missing = {"x", "c", "f", "l", "e"} - set(body)
    if missing:
        raise DataValidationError(f"{path}: missing rows {sorted(missing)}")
    return make_economy(codes, Z, body["x"], body["c"], body["f"], body["l"],
                        e0=body["e"], strict=strict)


def write_io_table(economy, path):
    """Inverse of :func:`load_io_table` (full float precision)."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["code"] + list(economy.codes))
        for i, code in enumerate(economy.codes):
            w.writerow([code] + [repr(float(v)) for v in economy.Z0[i]])
        for label, vec in (("x", economy.x0), ("c", economy.c0), ("f", economy.f0),
                           ("l", economy.l0), ("e", economy.e0)):
            w.writerow([label] + [repr(float(v)) for v in vec])


# ---------------------------------------------------------------------------
# Criticality ratings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalityMatrix:
    """Per (input, industry) rating: 1 critical, 0.5 important, 0 non-critical.

    Row = supplying input, column = consuming industry. ``critical_sets[j]``
    and ``important_sets[j]`` give the input index sets per consuming industry.
    """

    ratings: np.ndarray
    codes: tuple = ()

    @property
    def n(self):
        return self.ratings.shape[0]

    @property
    def critical_sets(self):
        return tuple(np.where(self.ratings[:, j] == 1.0)[0] for j in range(self.n))

    @property
    def important_sets(self):
        return tuple(np.where(self.ratings[:, j] == 0.5)[0] for j in range(self.n))

    def counts(self):
        """(rows, cols) category counts per industry: columns 1 / 0.5 / 0."""
        r = self.ratings
        row = np.stack([(r == 1.0).sum(axis=1), (r == 0.5).sum(axis=1),
                        (r == 0.0).sum(axis=1)], axis=1)
        col = np.stack([(r == 1.0).sum(axis=0), (r == 0.5).sum(axis=0),
                        (r == 0.0).sum(axis=0)], axis=1)
        return row, col


_ALLOWED_RATINGS = (0.0, 0.5, 1.0)


def aggregate_criticality(ratings_per_analyst, codes=()):
    """Combine one or more analyst rating layers into a single matrix.

    Per cell, NA (NaN) layers are dropped and the mean is taken: mean >= 2/3
    rounds to critical, <= 1/3 to non-critical, otherwise important. Cells
    rated NA by every analyst become non-critical (with a warning). Diagonal
    entries are critical by definition.
    """
    if not ratings_per_analyst:
        raise DataValidationError("need at least one rating layer")
    layers = [np.asarray(layer, dtype=float) for layer in ratings_per_analyst]
    shape = layers[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise DataValidationError(f"rating layers must be square, got {shape}")
    for layer in layers:
        if layer.shape != shape:
            raise DataValidationError("rating layers differ in shape")
        vals = layer[~np.isnan(layer)]
        if not np.isin(vals, _ALLOWED_RATINGS).all():
            raise DataValidationError("illegal rating value (allowed: 0, 0.5, 1, NA)")
    stack = np.stack(layers)
    with np.errstate(invalid="ignore"):
        mean = np.nanmean(stack, axis=0)
    all_na = np.isnan(mean)
    if all_na.any():
        logger.warning("criticality: %d cells rated NA by every analyst; treated "
                       "as non-critical", int(all_na.sum()))
        mean[all_na] = 0.0
    out = np.full(shape, 0.5)
    out[mean >= 2.0 / 3.0 - 1e-12] = 1.0
    out[mean <= 1.0 / 3.0 + 1e-12] = 0.0
    np.fill_diagonal(out, 1.0)
    return CriticalityMatrix(ratings=out, codes=tuple(codes))


def load_criticality(path, expected_codes=None):
    """Load ``criticality.csv``: an (N+1) x (N+1) grid with cells 0/0.5/1/NA."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    codes = [c.strip() for c in rows[0][1:]]
    n = len(codes)
    if expected_codes is not None and list(expected_codes) != codes:
        raise DataValidationError(f"{path}: industry codes do not match the io table")
    raw = np.empty((n, n))
    for i, row in enumerate(rows[1:]):
        if row[0].strip() != codes[i]:
            raise DataValidationError(f"{path}: row {i} labelled {row[0]!r}")
        for j, cell in enumerate(row[1:]):
            cell = cell.strip()
            raw[i, j] = np.nan if cell.upper() == "NA" else float(cell)
    return aggregate_criticality([raw], codes=codes)


def validate_criticality_counts(matrix, expected_row, expected_col):
    """Compare a matrix against reference per-industry rating counts.

    ``expected_row`` / ``expected_col`` map code -> (n_critical, n_important,
    n_noncritical). Mismatches are logged and returned, not raised: the
    reference tallies themselves are not fully self-consistent.
    """
    row, col = matrix.counts()
    mismatches = []
    for k, code in enumerate(matrix.codes):
        for kind, got, want in (("row", row[k], expected_row.get(code)),
                                ("col", col[k], expected_col.get(code))):
            if want is None:
                continue
            if tuple(int(v) for v in got) != tuple(want):
                mismatches.append(f"{code} {kind}: got {tuple(int(v) for v in got)}, "
                                  f"expected {tuple(want)}")
    for msg in mismatches:
        logger.warning("criticality counts: %s", msg)
    return mismatches


# ---------------------------------------------------------------------------
# Pandemic calibration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PandemicCalibration:
    """First-order pandemic shocks and work-organisation indices per industry.

    ``eps_S``/``eps_D``/``f_shock`` are reduction fractions (a negative value
    means the quantity increases, e.g. health consumption demand). ``rli`` is
    the remote labor index, ``ess_w`` the essential worker share and ``ess_c``
    the essential on-site consumption share (zero except retail).
    """

    codes: tuple
    eps_S: np.ndarray
    eps_D: np.ndarray
    rli: np.ndarray
    ess_w: np.ndarray
    ess_c: np.ndarray
    f_shock: np.ndarray
    onsite: np.ndarray

    @property
    def n(self):
        return len(self.codes)

    def without_supply_shocks(self):
        return replace(self, eps_S=np.zeros(self.n))

    def without_demand_shocks(self):
        return replace(self, eps_D=np.zeros(self.n), f_shock=np.zeros(self.n))


def make_pandemic_calibration(codes, eps_S, eps_D, rli, ess_w, f_shock, onsite,
                              ess_c=None):
    codes = tuple(str(c) for c in codes)
    n = len(codes)
    eps_S = _as_float_vector(eps_S, n, "eps_S")
    eps_D = _as_float_vector(eps_D, n, "eps_D")
    rli = _as_float_vector(rli, n, "rli")
    ess_w = _as_float_vector(ess_w, n, "ess_w")
    f_shock = _as_float_vector(f_shock, n, "f_shock")
    onsite = np.asarray(onsite, dtype=bool)
    if np.any(eps_S < 0) or np.any(eps_S > 1):
        raise DataValidationError("supply shocks must lie in [0, 1]")
    # Demand-side shocks may be negative (a demand increase, e.g. health).
    if np.any(np.abs(eps_D) > 1) or np.any(np.abs(f_shock) > 1):
        raise DataValidationError("demand shocks must lie in [-1, 1]")
    for name, v in (("rli", rli), ("ess_w", ess_w)):
        if np.any(v < 0) or np.any(v > 1):
            raise DataValidationError(f"{name} must lie in [0, 1]")
    if ess_c is None:
        ess_c = np.zeros(n)
        if RETAIL_CODE in codes:
            k = codes.index(RETAIL_CODE)
            ess_c[k] = ess_w[k]
    else:
        ess_c = _as_float_vector(ess_c, n, "ess_c")
    return PandemicCalibration(codes=codes, eps_S=eps_S, eps_D=eps_D, rli=rli,
                               ess_w=ess_w, ess_c=ess_c, f_shock=f_shock,
                               onsite=onsite)


def load_pandemic_calibration(path, expected_codes=None):
    """Load ``shocks.csv``.

    Shock columns carry signed percents (``eps_S_pct = -85`` means an 85%
    labor reduction); they are converted to reduction fractions. ``rli`` and
    ``ess_w`` are fractions in [0, 1].
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    codes, eps_S, eps_D, rli, ess_w, f_shock, onsite = [], [], [], [], [], [], []
    for row in rows:
        code = row["code"].strip()
        if expected_codes is not None and code not in expected_codes:
            raise DataValidationError(f"{path}: unknown industry code {code!r}")
        s_pct = float(row["eps_S_pct"])
        d_pct = float(row["eps_D_pct"])
        f_pct = float(row["f_shock_pct"])
        if not (-100.0 <= s_pct <= 0.0):
            raise DataValidationError(f"{path}: {code}: eps_S_pct {s_pct} outside [-100, 0]")
        for name, pct in (("eps_D_pct", d_pct), ("f_shock_pct", f_pct)):
            if not (-100.0 <= pct <= 100.0):
                raise DataValidationError(f"{path}: {code}: {name} {pct} outside [-100, 100]")
        codes.append(code)
        eps_S.append(-s_pct / 100.0)
        eps_D.append(-d_pct / 100.0)
        f_shock.append(-f_pct / 100.0)
        rli.append(float(row["rli"]))
        ess_w.append(float(row["ess_w"]))
        onsite.append(bool(int(row["onsite"])))
    if expected_codes is not None and list(expected_codes) != codes:
        raise DataValidationError(f"{path}: industry codes do not match the io table")
    return make_pandemic_calibration(codes, eps_S, eps_D, rli, ess_w, f_shock, onsite)


def write_pandemic_calibration(calib, path):
    """Inverse of :func:`load_pandemic_calibration`."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["code", "eps_S_pct", "rli", "ess_w", "eps_D_pct",
                    "f_shock_pct", "onsite"])
        for k, code in enumerate(calib.codes):
            w.writerow([code, repr(float(-calib.eps_S[k] * 100.0)),
                        repr(float(calib.rli[k])), repr(float(calib.ess_w[k])),
                        repr(float(-calib.eps_D[k] * 100.0)),
                        repr(float(-calib.f_shock[k] * 100.0)),
                        int(calib.onsite[k])])


# ---------------------------------------------------------------------------
# Inventory targets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InventoryTargets:
    """Target input coverage per industry, in days."""

    n_days: np.ndarray
    source_ratios: np.ndarray | None = None

    def with_uniform_days(self, days):
        return InventoryTargets(n_days=np.full_like(self.n_days, float(days)))


def inventory_targets_from_ratios(ratios):
    """Days of coverage from inventory/monthly-sales ratios (one month = 30 days)."""
    ratios = np.asarray(ratios, dtype=float)
    if np.any(ratios < 0):
        raise DataValidationError("inventory ratios must be non-negative")
    return InventoryTargets(n_days=30.0 * ratios, source_ratios=ratios)


def load_inventory_ratios(path, expected_codes=None):
    """Load ``inventory_ratios.csv`` (columns ``code, ratio_monthly``)."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    codes = [r["code"].strip() for r in rows]
    if expected_codes is not None and list(expected_codes) != codes:
        raise DataValidationError(f"{path}: industry codes do not match the io table")
    ratios = [float(r["ratio_monthly"]) for r in rows]
    return inventory_targets_from_ratios(ratios)


# ---------------------------------------------------------------------------
# Model parameters
# ---------------------------------------------------------------------------

def _default_rho():
    # Daily persistence matching a quarterly persistence of 0.6.
    return 1.0 - (1.0 - 0.6) / 90.0


@dataclass(frozen=True)
class EconParams:
    """Tunable parameters of the daily simulation.

    ``rho`` defaults to the daily value derived from the quarterly
    persistence ``rho_bar`` (1 - (1 - rho_bar)/90); the flat value 0.987 that
    appears alongside it in the source calibration can be set explicitly.
    ``m`` is the domestic-consumption share of labor income.
    """

    tau: float = 10.0
    gamma_H: float = 1.0 / 30.0
    gamma_F: float = 1.0 / 15.0
    rho_bar: float = 0.6
    rho: float = field(default_factory=_default_rho)
    m: float = 0.82
    b: float = 0.8
    delta_s_save: float = 0.5
    belief_L_share: float = 0.5
    t_start_lockdown: int = 1
    t_end_lockdown: int = 61
    t_end_pandemic: int = 361
    prod_fn: str = "critical_baseline"
    cons_fn: str = "muellbauer"
    # Eq.-ambiguity switches; defaults follow the main-text reading.
    recovery_from_reopening: bool = False
    mu_s_adult_norm: bool = False

    def __post_init__(self):
        if not (0.0 <= self.gamma_H <= self.gamma_F <= 1.0):
            raise DataValidationError(
                f"need 0 <= gamma_H <= gamma_F <= 1, got {self.gamma_H}, {self.gamma_F}")
        if not (0.0 < self.rho < 1.0):
            raise DataValidationError(f"rho must lie in (0, 1), got {self.rho}")
        for name in ("b", "m", "delta_s_save", "belief_L_share"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise DataValidationError(f"{name} must lie in [0, 1], got {v}")
        if self.tau <= 0:
            raise DataValidationError("tau must be positive")
        if not (self.t_start_lockdown < self.t_end_lockdown <= self.t_end_pandemic):
            raise DataValidationError(
                "need t_start_lockdown < t_end_lockdown <= t_end_pandemic")
        if self.prod_fn not in PROD_FUNCTIONS:
            raise DataValidationError(f"unknown production function {self.prod_fn!r}")
        if self.cons_fn not in CONS_FUNCTIONS:
            raise DataValidationError(f"unknown consumption function {self.cons_fn!r}")


_BOOL_KEYS = {"recovery_from_reopening", "mu_s_adult_norm"}
_INT_KEYS = {"t_start_lockdown", "t_end_lockdown", "t_end_pandemic"}
_STR_KEYS = {"prod_fn", "cons_fn"}


def read_config(path):
    """Parse a flat ``key = value`` config file (``#`` comments allowed)."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataValidationError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def load_econ_params(path=None, **overrides):
    """Build :class:`EconParams` from an optional config file plus overrides."""
    kwargs = {}
    if path is not None:
        raw = read_config(path)
        valid = set(EconParams.__dataclass_fields__)
        for key, value in raw.items():
            if key not in valid:
                raise DataValidationError(f"{path}: unknown parameter {key!r}")
            if key in _STR_KEYS:
                kwargs[key] = value
            elif key in _BOOL_KEYS:
                kwargs[key] = value.lower() in ("1", "true", "yes")
            elif key in _INT_KEYS:
                kwargs[key] = int(value)
            else:
                kwargs[key] = float(value)
    kwargs.update(overrides)
    if "rho" not in kwargs and "rho_bar" in kwargs:
        kwargs["rho"] = 1.0 - (1.0 - float(kwargs["rho_bar"])) / 90.0
    return EconParams(**kwargs)


# ---------------------------------------------------------------------------
# Synthetic economies
# ---------------------------------------------------------------------------

def ras_balance(seed_matrix, row_targets, col_targets, tol=1e-12, max_iter=500):
    """Biproportional (RAS) scaling of a non-negative seed matrix to given
    row and column sums. Zero targets force zero lines; the two target sums
    must agree."""
    seed = np.asarray(seed_matrix, dtype=float)
    r = np.asarray(row_targets, dtype=float)
    c = np.asarray(col_targets, dtype=float)
    if abs(r.sum() - c.sum()) > 1e-8 * max(r.sum(), 1.0):
        raise DataValidationError("row and column targets do not balance")
    M = seed.copy()
    M[:, c == 0] = 0.0
    M[r == 0, :] = 0.0
    for _ in range(max_iter):
        rows = M.sum(axis=1)
        scale = np.where(rows > 0, r / np.where(rows > 0, rows, 1.0), 0.0)
        M *= scale[:, None]
        cols = M.sum(axis=0)
        scale = np.where(cols > 0, c / np.where(cols > 0, cols, 1.0), 0.0)
        M *= scale[None, :]
        if np.abs(M.sum(axis=1) - r).max() <= tol * max(r.max(), 1.0):
            break
    return M


def _quantize(arr, q=1024):
    # Keep generated shock fractions on a binary grid so the percent <->
    # fraction CSV round trip is exact.
    return np.round(np.asarray(arr) * q) / q


def generate_synthetic_economy(n, seed):
    """Deterministic synthetic economy for tests and desk-scale experiments.

    Returns ``(economy, criticality, calibration, targets)`` satisfying every
    structural invariant: accounting identity, productive coefficient matrix
    (column sums < 0.8), at least one critical input per industry and total
    consumption equal to ``m`` times total labor income so the zero-shock
    state is an exact fixed point.
    """
    if n < 2:
        raise DataValidationError("need at least two industries")
    rng = np.random.default_rng(seed)
    codes = [f"S{i:02d}" for i in range(n)]

    x = rng.lognormal(mean=3.0, sigma=0.6, size=n)
    inter_share = rng.uniform(0.3, 0.7, size=n)        # row sums of Z
    R = inter_share * x
    cons_split = rng.uniform(0.3, 0.7, size=n)
    c = cons_split * (x - R)
    f = x - R - c

    col_intensity = rng.uniform(0.35, 0.7, size=n)     # column sums of Z
    col_targets = col_intensity * x
    col_targets *= R.sum() / col_targets.sum()
    affinity = rng.uniform(0.1, 1.0, size=(n, n))
    Z = ras_balance(affinity * x[np.newaxis, :], R, col_targets)

    value_added = x - Z.sum(axis=0)
    labor_intensity = rng.uniform(0.4, 0.8, size=n)
    l = labor_intensity * value_added
    l *= (c.sum() / 0.82) / l.sum()
    # Cap labor below value added, re-spreading the excess proportionally.
    for _ in range(20):
        over = l > 0.95 * value_added
        if not over.any():
            break
        excess = (l[over] - 0.95 * value_added[over]).sum()
        l[over] = 0.95 * value_added[over]
        room = ~over
        l[room] += excess * l[room] / l[room].sum()
    e = 0.6 * (value_added - l)
    economy = make_economy(codes, Z, x, c, f, l, e0=e)

    ratings = np.zeros((n, n))
    u = rng.random((n, n))
    ratings[u < 0.15] = 1.0
    ratings[(u >= 0.15) & (u < 0.27)] = 0.5
    np.fill_diagonal(ratings, 1.0)
    criticality = CriticalityMatrix(ratings=ratings, codes=tuple(codes))

    ess_w = _quantize(rng.uniform(0.0, 1.0, size=n))
    rli = _quantize(rng.uniform(0.0, 1.0, size=n))
    eps_S = _quantize((1.0 - ess_w) * (1.0 - rli))
    eps_D = _quantize(rng.uniform(0.0, 0.8, size=n) * (rng.random(n) < 0.7))
    f_shock = _quantize(rng.uniform(0.0, 0.4, size=n))
    onsite = rng.random(n) < 0.3
    calibration = make_pandemic_calibration(codes, eps_S, eps_D, rli, ess_w,
                                            f_shock, onsite)

    targets = InventoryTargets(n_days=np.round(rng.uniform(5.0, 60.0, size=n), 1))
    return economy, criticality, calibration, targets
