#!/usr/bin/env python3
"""Build the bundled 55-industry UK-shaped calibration files.

Deterministic: re-running regenerates byte-identical CSVs. Prints the
diagnostics the bundled dataset must satisfy (accounting identity, workforce
shares, lockdown/open reproduction numbers) and fails hard if any is out of
range.

Run from the repo root:  python tools/build_datasets.py
"""

import csv
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from reopen import analysis, engine, epi, shocks  # noqa: E402
from reopen.data import (load_io_table, load_criticality,  # noqa: E402
                         load_pandemic_calibration, load_inventory_ratios,
                         make_economy, ras_balance)

OUT = Path(__file__).resolve().parents[1] / "src" / "reopen" / "datasets"

# ---------------------------------------------------------------------------
# Industry-level calibration: output / consumption / other-demand shares (%),
# supply shock (%), remote labor index (%), essential share (%), consumption
# demand shock (%), other-final-demand shock (%).
# ---------------------------------------------------------------------------

INDUSTRIES = [
    # code, x%, eps_S%, rli%, ess%, c%, eps_D%, f%, f_shock%
    ("A01", 0.8, 0.0, 14, 100, 0.9, -10, 0.3, -20),
    ("A02", 0.05, -85.0, 15, 0, 0.0, -10, 0.0, -23),
    ("A03", 0.1, 0.0, 36, 100, 0.0, -10, 0.1, -32),
    ("B", 1.3, -35.3, 31, 51, 0.1, -10, 1.4, -33),
    ("C10-C12", 2.8, -0.6, 22, 99, 2.5, -10, 1.3, -32),
    ("C13-C15", 0.4, -37.1, 31, 47, 0.1, -10, 0.5, -27),
    ("C16", 0.2, -61.1, 27, 18, 0.1, -10, 0.1, -16),
    ("C17", 0.4, -7.5, 31, 89, 0.1, -10, 0.2, -30),
    ("C18", 0.3, -6.0, 39, 90, 0.1, -10, 0.1, -18),
    ("C19", 0.9, -18.3, 36, 71, 1.5, -10, 0.7, -33),
    ("C20", 1.1, -2.6, 37, 96, 0.3, -10, 1.6, -32),
    ("C21", 0.7, -1.1, 40, 98, 0.3, -10, 1.2, -31),
    ("C22", 0.7, -28.3, 29, 60, 0.1, -10, 0.6, -28),
    ("C23", 0.5, -50.3, 36, 20, 0.1, -10, 0.2, -27),
    ("C24", 0.6, -57.7, 27, 20, 0.0, -10, 1.7, -33),
    ("C25", 1.1, -54.8, 34, 18, 0.1, -10, 0.7, -18),
    ("C26", 0.8, -38.5, 57, 10, 0.2, -10, 1.4, -28),
    ("C27", 0.4, -33.3, 37, 46, 0.1, -10, 0.8, -30),
    ("C28", 1.1, -49.7, 38, 20, 0.2, -10, 2.1, -30),
    ("C29", 1.6, -22.6, 30, 65, 1.3, -10, 2.6, -29),
    ("C30", 1.0, -48.8, 40, 17, 0.1, -10, 2.5, -31),
    ("C31_C32", 0.6, -36.6, 35, 43, 0.2, -10, 0.8, -25),
    ("C33", 0.4, -3.3, 39, 95, 0.0, -10, 0.0, -17),
    ("D35", 3.2, 0.0, 42, 100, 3.6, 0, 0.1, -20),
    ("E36", 0.2, 0.0, 33, 100, 0.6, 0, 0.0, -11),
    ("E37-E39", 0.8, 0.0, 30, 100, 0.6, 0, 1.1, -16),
    ("F", 7.9, -35.6, 28, 51, 0.3, -10, 11.5, -6),
    ("G45", 1.7, -31.6, 45, 41, 2.1, -10, 0.6, -23),
    ("G46", 3.5, -23.6, 50, 51, 3.3, -10, 4.3, -30),
    ("G47", 4.7, -30.5, 50, 37, 16.4, -10, 0.6, -28),
    ("H49", 2.0, -11.1, 31, 83, 2.7, -67, 0.2, -28),
    ("H50", 0.6, -12.4, 35, 81, 0.6, -67, 0.7, -32),
    ("H51", 0.6, -0.1, 29, 100, 1.2, -67, 0.4, -32),
    ("H52", 1.4, -0.5, 30, 99, 0.1, -67, 0.4, -26),
    ("H53", 0.7, 0.0, 36, 100, 0.1, 0, 0.1, -30),
    ("I", 2.9, -60.8, 35, 6, 8.4, -80, 0.7, -32),
    ("J58", 0.6, -14.4, 70, 48, 0.5, 0, 0.6, -24),
    ("J59_J60", 0.9, -32.8, 56, 34, 1.1, 0, 1.2, -15),
    ("J61", 1.6, -0.9, 55, 99, 1.9, 0, 0.8, -22),
    ("J62_J63", 2.3, -0.2, 71, 99, 0.2, 0, 2.6, -13),
    ("K64", 4.3, 0.0, 71, 100, 3.2, 0, 2.9, -32),
    ("K65", 3.2, 0.0, 71, 100, 6.3, 0, 1.5, -31),
    ("K66", 1.1, 0.0, 72, 100, 0.2, 0, 2.0, -33),
    ("L68", 7.8, -4.8, 49, 6, 25.3, 0, 1.0, -8),
    ("M69_M70", 2.8, -2.0, 64, 94, 0.0, 0, 1.3, -25),
    ("M71", 1.7, 0.0, 54, 100, 0.1, 0, 1.4, -19),
    ("M72", 0.5, 0.0, 59, 100, 0.0, 0, 1.1, -11),
    ("M73", 0.6, -22.5, 60, 36, 0.0, 0, 0.3, -30),
    ("M74_M75", 0.7, -3.0, 61, 94, 0.3, 0, 1.0, -30),
    ("N", 4.4, -34.9, 36, 42, 1.0, 0, 2.7, -29),
    ("O84", 4.8, -1.1, 45, 97, 0.6, 0, 11.9, -1),
    ("P85", 4.2, 0.0, 54, 100, 1.6, 0, 8.7, -2),
    ("Q", 7.0, -0.1, 36, 100, 2.8, 15, 15.0, 1),
    ("R_S", 3.2, -34.5, 39, 47, 5.6, -5, 2.5, -10),
    ("T", 0.2, 0.0, 0, 0, 0.8, 0, 0.0, -32),
]

CODES = [row[0] for row in INDUSTRIES]
N = len(CODES)
IDX = {c: k for k, c in enumerate(CODES)}

ONSITE = {"G45", "G47", "H49", "H50", "H51", "H52", "H53", "I", "L68",
          "M69_M70", "O84", "P85", "R_S", "T"}

# Inventory / monthly gross output ratios per industry.
INVENTORY_RATIOS = {
    "A01": 4.30, "A02": 4.30, "A03": 4.30, "B": 0.53, "C10-C12": 1.18,
    "C13-C15": 3.81, "C16": 1.50, "C17": 1.52, "C18": 1.11, "C19": 0.84,
    "C20": 1.92, "C21": 1.92, "C22": 1.83, "C23": 1.81, "C24": 2.06,
    "C25": 2.34, "C26": 2.18, "C27": 2.37, "C28": 2.33, "C29": 1.92,
    "C30": 1.92, "C31_C32": 2.33, "C33": 2.33, "D35": 0.53, "E36": 0.53,
    "E37-E39": 0.53, "F": 0.53, "G45": 7.69, "G46": 5.30, "G47": 3.37,
    "H49": 0.11, "H50": 0.11, "H51": 0.11, "H52": 0.11, "H53": 0.11,
    "I": 0.11, "J58": 0.11, "J59_J60": 0.11, "J61": 0.11, "J62_J63": 0.11,
    "K64": 0.11, "K65": 0.11, "K66": 0.11, "L68": 0.11, "M69_M70": 0.11,
    "M71": 0.11, "M72": 0.11, "M73": 0.11, "M74_M75": 0.11, "N": 0.11,
    "O84": 0.11, "P85": 0.11, "Q": 0.11, "R_S": 0.11, "T": 0.11,
}

# Per-industry counts of critical / important ratings, as rated input
# (rows) and as rating industry (columns).
ROW_COUNTS = {
    "A01": (4, 2), "A02": (2, 3), "A03": (2, 1), "B": (7, 1),
    "C10-C12": (5, 6), "C13-C15": (2, 5), "C16": (3, 3), "C17": (5, 10),
    "C18": (3, 6), "C19": (18, 4), "C20": (21, 10), "C21": (2, 2),
    "C22": (11, 7), "C23": (8, 2), "C24": (8, 2), "C25": (12, 4),
    "C26": (10, 7), "C27": (7, 6), "C28": (10, 12), "C29": (4, 5),
    "C30": (2, 6), "C31_C32": (1, 1), "C33": (17, 9), "D35": (31, 3),
    "E36": (19, 3), "E37-E39": (18, 3), "F": (5, 3), "G45": (2, 5),
    "G46": (19, 3), "G47": (2, 3), "H49": (28, 3), "H50": (9, 8),
    "H51": (5, 7), "H52": (12, 9), "H53": (6, 7), "I": (5, 3),
    "J58": (1, 2), "J59_J60": (2, 2), "J61": (26, 11), "J62_J63": (16, 13),
    "K64": (10, 19), "K65": (6, 12), "K66": (5, 7), "L68": (1, 3),
    "M69_M70": (12, 15), "M71": (6, 10), "M72": (1, 2), "M73": (1, 7),
    "M74_M75": (1, 8), "N": (16, 16), "O84": (6, 3), "P85": (1, 4),
    "Q": (1, 6), "R_S": (1, 1), "T": (0, 0),
}
COL_COUNTS = {
    "A01": (9, 9), "A02": (7, 9), "A03": (8, 5), "B": (9, 2),
    "C10-C12": (14, 5), "C13-C15": (6, 2), "C16": (8, 3), "C17": (14, 11),
    "C18": (6, 3), "C19": (15, 6), "C20": (15, 6), "C21": (9, 17),
    "C22": (14, 5), "C23": (7, 1), "C24": (12, 7), "C25": (5, 3),
    "C26": (14, 10), "C27": (13, 9), "C28": (5, 1), "C29": (14, 10),
    "C30": (12, 10), "C31_C32": (8, 4), "C33": (8, 2), "D35": (10, 5),
    "E36": (4, 5), "E37-E39": (6, 8), "F": (14, 9), "G45": (9, 7),
    "G46": (4, 25), "G47": (6, 10), "H49": (11, 2), "H50": (8, 5),
    "H51": (10, 6), "H52": (9, 7), "H53": (3, 5), "I": (7, 6),
    "J58": (10, 14), "J59_J60": (9, 5), "J61": (7, 5), "J62_J63": (7, 6),
    "K64": (6, 3), "K65": (6, 3), "K66": (6, 4), "L68": (7, 5),
    "M69_M70": (5, 3), "M71": (4, 2), "M72": (4, 3), "M73": (5, 2),
    "M74_M75": (4, 1), "N": (3, 2), "O84": (5, 2), "P85": (6, 8),
    "Q": (7, 7), "R_S": (4, 0), "T": (0, 0),
}

# Contact-intensity survey rows: place, category, visit likelihood %,
# duration (hours), median crowd, physical-contact %.
PLACES = [
    ("Work", "work", 21.20, 7.60, 20.00, 55.80),
    ("Pre-school", "school", 8.60, 7.60, 20.00, 73.30),
    ("School", "school", 12.00, 7.60, 20.00, 71.10),
    ("Convenience store", "consume", 5.20, 0.40, 10.00, 8.30),
    ("Large store", "consume", 24.10, 0.80, 21.50, 18.00),
    ("Restaurant", "consume", 9.40, 1.40, 30.00, 30.80),
    ("Sports venue", "consume", 11.50, 2.30, 34.50, 53.80),
    ("Public transport", "transport", 16.30, 1.00, 40.00, 8.30),
    ("Home", "home", 95.00, 18.40, 1.00, 73.70),
    ("Car", "home", 58.70, 0.90, 1.00, 25.80),
    ("Public urban space", "home", 6.60, 1.80, 20.00, 28.30),
    ("Friends and relatives", "home", 21.00, 5.10, 3.00, 80.10),
]

# Workplace infection indices (0-100): exposure to infection and physical
# proximity. On-site, contact-heavy industries score high; office work low.
WORK_CONTEXT = {
    "A01": (10, 32), "A02": (5, 25), "A03": (8, 35), "B": (12, 45),
    "C10-C12": (15, 58), "C13-C15": (8, 52), "C16": (8, 50), "C17": (8, 50),
    "C18": (8, 46), "C19": (10, 45), "C20": (12, 46), "C21": (25, 48),
    "C22": (8, 50), "C23": (8, 50), "C24": (8, 52), "C25": (8, 52),
    "C26": (8, 48), "C27": (8, 48), "C28": (8, 50), "C29": (8, 55),
    "C30": (8, 52), "C31_C32": (8, 50), "C33": (10, 54), "D35": (10, 38),
    "E36": (12, 38), "E37-E39": (22, 45), "F": (12, 58), "G45": (15, 58),
    "G46": (10, 48), "G47": (25, 64), "H49": (30, 62), "H50": (15, 52),
    "H51": (35, 68), "H52": (12, 48), "H53": (25, 60), "I": (30, 70),
    "J58": (6, 30), "J59_J60": (8, 38), "J61": (8, 28), "J62_J63": (5, 26),
    "K64": (6, 30), "K65": (6, 28), "K66": (6, 28), "L68": (10, 42),
    "M69_M70": (6, 30), "M71": (6, 32), "M72": (12, 34), "M73": (6, 32),
    "M74_M75": (10, 36), "N": (16, 46), "O84": (18, 46), "P85": (30, 66),
    "Q": (88, 82), "R_S": (30, 64), "T": (40, 62),
}

# Rough UK employment-share prior (% of employed population); adjusted below
# to reproduce the essential / remote / on-site workforce shares.
EMPLOYMENT_PRIOR = {
    "A01": 1.2, "A02": 0.06, "A03": 0.04, "B": 0.2, "C10-C12": 1.3,
    "C13-C15": 0.3, "C16": 0.25, "C17": 0.2, "C18": 0.35, "C19": 0.04,
    "C20": 0.3, "C21": 0.15, "C22": 0.5, "C23": 0.3, "C24": 0.3,
    "C25": 0.9, "C26": 0.4, "C27": 0.3, "C28": 0.8, "C29": 0.5,
    "C30": 0.4, "C31_C32": 0.6, "C33": 0.3, "D35": 0.5, "E36": 0.15,
    "E37-E39": 0.6, "F": 6.5, "G45": 1.8, "G46": 3.7, "G47": 9.5,
    "H49": 3.0, "H50": 0.06, "H51": 0.25, "H52": 1.0, "H53": 0.9,
    "I": 7.3, "J58": 0.7, "J59_J60": 0.7, "J61": 0.7, "J62_J63": 3.2,
    "K64": 1.6, "K65": 0.9, "K66": 0.9, "L68": 1.8, "M69_M70": 3.3,
    "M71": 1.6, "M72": 0.6, "M73": 0.5, "M74_M75": 0.9, "N": 9.0,
    "O84": 4.3, "P85": 8.8, "Q": 13.3, "R_S": 5.3, "T": 0.25,
}

# Labor share of value added per industry (compensation weights).
LABOR_SHARE_OF_VA = {
    "A01": 0.45, "A02": 0.45, "A03": 0.45, "B": 0.30, "D35": 0.30,
    "E36": 0.35, "E37-E39": 0.45, "F": 0.60, "G45": 0.65, "G46": 0.60,
    "G47": 0.70, "H49": 0.70, "H50": 0.55, "H51": 0.55, "H52": 0.65,
    "H53": 0.75, "I": 0.72, "J58": 0.55, "J59_J60": 0.55, "J61": 0.40,
    "J62_J63": 0.65, "K64": 0.45, "K65": 0.40, "K66": 0.55, "L68": 0.06,
    "M69_M70": 0.65, "M71": 0.65, "M72": 0.70, "M73": 0.60,
    "M74_M75": 0.65, "N": 0.75, "O84": 0.72, "P85": 0.85, "Q": 0.80,
    "R_S": 0.70, "T": 1.00,
}
MANUF_LABOR_SHARE = 0.55

# Intermediate-input intensity (column sum of A) per broad sector.
INPUT_INTENSITY = {
    "A": 0.55, "B": 0.45, "C": 0.62, "D": 0.50, "E": 0.45, "F": 0.58,
    "G": 0.45, "H": 0.50, "I": 0.45, "J": 0.42, "K": 0.40, "L": 0.22,
    "M": 0.42, "N": 0.42, "O": 0.38, "P": 0.28, "Q": 0.38, "R": 0.40,
    "T": 0.0,
}

TOTAL_OUTPUT = 100.0
TOTAL_CONSUMPTION = 24.0
TOTAL_OTHER_DEMAND = 24.0
M_SHARE = 0.82          # domestic-consumption share of labor income
ETA_S = 0.23            # student share of population
WORKING_SHARE = 0.62    # employed share of population

ESSENTIAL_TARGET = 0.67
REMOTE_TARGET = 0.44
ONSITE_TARGET = 0.37


def sector(code):
    return code[0]


def build_affinity():
    """Supplier-buyer affinity seed for the RAS balancing."""
    g = np.full((N, N), 0.25)
    for i, ci in enumerate(CODES):
        for j, cj in enumerate(CODES):
            if sector(ci) == sector(cj):
                g[i, j] += 1.0
    universal = ["D35", "E36", "E37-E39", "J61", "K64", "K65", "H49", "H53",
                 "N", "M69_M70", "L68", "G46"]
    for code in universal:
        g[IDX[code], :] += 0.75
    links = [
        ("A01", "C10-C12", 2.5), ("A03", "C10-C12", 1.5), ("A02", "C16", 2.5),
        ("A02", "C17", 2.0), ("B", "C19", 2.5), ("B", "C23", 2.0),
        ("B", "C24", 2.0), ("B", "D35", 2.0), ("C16", "F", 2.0),
        ("C23", "F", 2.5), ("C25", "F", 1.5), ("C24", "C25", 2.0),
        ("C25", "C28", 1.5), ("C25", "C29", 1.5), ("C26", "C27", 1.5),
        ("C26", "C28", 1.5), ("C26", "C29", 1.5), ("C26", "C30", 1.5),
        ("C26", "J62_J63", 1.5), ("C20", "C21", 1.5), ("C20", "C22", 1.5),
        ("C19", "H49", 1.8), ("C19", "H50", 1.8), ("C19", "H51", 1.8),
        ("C19", "A01", 1.2), ("C10-C12", "I", 2.0), ("H52", "G46", 1.2),
        ("H52", "G47", 1.2), ("M73", "G47", 1.2), ("M73", "J58", 1.0),
        ("M73", "K65", 1.0), ("J62_J63", "K64", 1.2), ("J62_J63", "K65", 1.2),
        ("C21", "Q", 2.0), ("C20", "Q", 1.2), ("I", "N", 0.8),
        ("F", "L68", 2.0), ("C29", "G45", 2.0),
    ]
    for src, dst, w in links:
        g[IDX[src], IDX[dst]] += w
    g[:, IDX["T"]] = 0.0  # household activities use no inputs
    return g


def build_economy():
    tab = np.array([row[1:] for row in INDUSTRIES], dtype=float)
    x = tab[:, 0] / tab[:, 0].sum() * TOTAL_OUTPUT
    c = tab[:, 4] / tab[:, 4].sum() * TOTAL_CONSUMPTION
    f = tab[:, 6] / tab[:, 6].sum() * TOTAL_OTHER_DEMAND
    R = x - c - f
    assert np.all(R >= 0), "intermediate sales must be non-negative"

    intensity = np.array([INPUT_INTENSITY[sector(code)] for code in CODES])
    col_targets = intensity * x
    scale = R.sum() / col_targets.sum()
    col_targets *= scale
    assert np.all(col_targets <= 0.75 * x + 1e-12)
    Z = ras_balance(build_affinity() * x[np.newaxis, :], R, col_targets,
                    tol=1e-14, max_iter=2000)

    va = x - Z.sum(axis=0)
    lab = np.array([LABOR_SHARE_OF_VA.get(code, MANUF_LABOR_SHARE)
                    for code in CODES])
    l = lab * va
    l *= (c.sum() / M_SHARE) / l.sum()
    for _ in range(50):
        over = l > 0.95 * va
        if not over.any():
            break
        excess = (l[over] - 0.95 * va[over]).sum()
        l[over] = 0.95 * va[over]
        l[~over] += excess * l[~over] / l[~over].sum()
    e = 0.6 * (va - l)
    return make_economy(CODES, Z, x, c, f, l, e0=e, strict=True)


# Low-shock infrastructural suppliers: natural critical inputs to services.
INFRA_ROWS = ("D35", "E36", "E37-E39", "J61", "J62_J63", "H49", "H52", "H53",
              "K64", "C33", "M69_M70", "C19")


def _crit_affinity():
    """Plausibility weights for routing rating slots into columns.

    Suppliers facing large lockdown shocks are kept out of thin-inventory
    (service) columns: analysts rate machinery critical to factories, not to
    law firms. Infrastructure inputs are plausible everywhere."""
    eps_S = np.array([-row[2] / 100.0 for row in INDUSTRIES])
    n_days = np.array([30.0 * INVENTORY_RATIOS[c] for c in CODES])
    w = np.ones((N, N))
    for i, ci in enumerate(CODES):
        for j, cj in enumerate(CODES):
            if sector(ci) == sector(cj):
                w[i, j] *= 2.0
            if ci in INFRA_ROWS:
                w[i, j] *= 3.0
            if eps_S[i] > 0.15 and n_days[j] < 10.0:
                w[i, j] *= 0.05
    links = [("A01", "C10-C12"), ("A02", "C16"), ("A02", "C17"),
             ("B", "C19"), ("B", "C23"), ("B", "C24"), ("B", "D35"),
             ("C16", "F"), ("C23", "F"), ("C25", "F"), ("C24", "C25"),
             ("C25", "C28"), ("C25", "C29"), ("C26", "C27"), ("C26", "C28"),
             ("C26", "C29"), ("C26", "C30"), ("C26", "J62_J63"),
             ("C20", "C21"), ("C20", "C22"), ("C19", "H49"), ("C19", "H50"),
             ("C19", "H51"), ("C21", "Q"), ("C10-C12", "I"), ("C29", "G45")]
    for src, dst in links:
        w[IDX[src], IDX[dst]] *= 3.0
    return w


def build_criticality():
    """Greedy bipartite fill matching the published per-industry counts.

    Column counts (input sets per industry) are matched exactly; row counts
    as closely as the inconsistent published margins allow. Diagonals are
    critical by definition."""
    ratings = np.zeros((N, N))
    affinity = _crit_affinity()
    row_quota = {cat: np.array([ROW_COUNTS[c][k] for c in CODES], dtype=float)
                 for k, cat in enumerate(("crit", "imp"))}
    np.fill_diagonal(ratings, 1.0)
    for j, code in enumerate(CODES):
        row_quota["crit"][j] -= 1.0
    for cat, value in (("crit", 1.0), ("imp", 0.5)):
        for j in np.argsort([-COL_COUNTS[c][0 if cat == "crit" else 1]
                             for c in CODES], kind="stable"):
            code = CODES[j]
            need = COL_COUNTS[code][0 if cat == "crit" else 1]
            if cat == "crit":
                need -= 1  # diagonal already assigned
            free = np.where((ratings[:, j] == 0.0)
                            & (np.arange(N) != j))[0]
            score = np.maximum(row_quota[cat][free], 0.1) * affinity[free, j]
            order = free[np.argsort(-score, kind="stable")]
            chosen = order[:max(need, 0)]
            ratings[chosen, j] = value
            row_quota[cat][chosen] -= 1.0
    return ratings


def solve_eta():
    """Employment shares close to the prior that reproduce the essential,
    remote-capable and on-site workforce shares."""
    from scipy.optimize import minimize

    prior = np.array([EMPLOYMENT_PRIOR[c] for c in CODES])
    prior = prior / prior.sum()
    tab = np.array([row[1:] for row in INDUSTRIES], dtype=float)
    rli = tab[:, 2] / 100.0
    ess = tab[:, 3] / 100.0
    onsite = ess * (1.0 - rli)

    def objective(eta):
        return float(((eta - prior) ** 2 / prior).sum())

    constraints = [
        {"type": "eq", "fun": lambda eta: eta.sum() - 1.0},
        {"type": "eq", "fun": lambda eta: float((eta * ess).sum()) - ESSENTIAL_TARGET},
        {"type": "eq", "fun": lambda eta: float((eta * rli).sum()) - REMOTE_TARGET},
        {"type": "eq", "fun": lambda eta: float((eta * onsite).sum()) - ONSITE_TARGET},
    ]
    res = minimize(objective, prior, method="SLSQP", constraints=constraints,
                   bounds=[(1e-4, 0.2)] * N, options={"maxiter": 500, "ftol": 1e-14})
    assert res.success, res.message
    eta = res.x / res.x.sum()
    return np.round(eta, 8)


def write_csvs(economy, ratings, eta):
    OUT.mkdir(parents=True, exist_ok=True)

    with (OUT / "io_table.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["code"] + CODES)
        for i, code in enumerate(CODES):
            w.writerow([code] + [f"{v:.10g}" for v in economy.Z0[i]])
        for label, vec in (("x", economy.x0), ("c", economy.c0),
                           ("f", economy.f0), ("l", economy.l0),
                           ("e", economy.e0)):
            w.writerow([label] + [f"{v:.10g}" for v in vec])

    with (OUT / "criticality.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["input"] + CODES)
        for i, code in enumerate(CODES):
            w.writerow([code] + [f"{v:g}" for v in ratings[i]])

    with (OUT / "shocks.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["code", "eps_S_pct", "rli", "ess_w", "eps_D_pct",
                    "f_shock_pct", "onsite"])
        for code, _x, eps_s, rli, ess, _c, eps_d, _f, f_shock in INDUSTRIES:
            w.writerow([code, f"{eps_s:g}", f"{rli / 100.0:g}",
                        f"{ess / 100.0:g}", f"{eps_d:g}", f"{f_shock:g}",
                        int(code in ONSITE)])

    with (OUT / "inventory_ratios.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["code", "ratio_monthly"])
        for code in CODES:
            w.writerow([code, f"{INVENTORY_RATIOS[code]:g}"])

    with (OUT / "epi_places.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["place", "category", "visit_pct", "duration_hours",
                    "crowd", "physical_pct"])
        for row in PLACES:
            w.writerow([row[0], row[1]] + [f"{v:g}" for v in row[2:]])

    with (OUT / "epi_industry.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["code", "exposure", "proximity", "eta"])
        for k, code in enumerate(CODES):
            expo, prox = WORK_CONTEXT[code]
            w.writerow([code, f"{expo:g}", f"{prox:g}",
                        f"{eta[k] * WORKING_SHARE:.10g}"])

    (OUT / "epi_params.cfg").write_text(
        "r0_pre = 2.6\n"
        "r0_pre_sd = 0.54\n"
        "r0_lockdown_anchor = 0.62\n"
        f"gamma_rec = {1.0 / 7.0!r}\n"
        f"g = {17.0 / 23.0!r}\n"
        "kappa = 0.76\n"
        f"eta_s = {ETA_S}\n")

    (OUT / "econ_params.cfg").write_text(
        "# Baseline simulation parameters; every key is optional.\n"
        "tau = 10\n"
        f"gamma_H = {1.0 / 30.0!r}\n"
        f"gamma_F = {1.0 / 15.0!r}\n"
        "rho_bar = 0.6\n"
        f"rho = {1.0 - (1.0 - 0.6) / 90.0!r}\n"
        "m = 0.82\n"
        "b = 0.8\n"
        "delta_s_save = 0.5\n"
        "belief_L_share = 0.5\n"
        "t_start_lockdown = 1\n"
        "t_end_lockdown = 61\n"
        "t_end_pandemic = 361\n"
        "prod_fn = critical_baseline\n"
        "cons_fn = muellbauer\n")


def diagnostics():
    from reopen.bundle import load_dataset

    ds = load_dataset(OUT)
    economy, calib, epi_cal = ds.economy, ds.calibration, ds.epi
    shares = epi.workforce_shares(calib, epi_cal.eta)
    print(f"workforce shares: essential={shares['essential']:.4f} "
          f"remote={shares['remote']:.4f} onsite={shares['onsite']:.4f}")
    assert abs(shares["essential"] - ESSENTIAL_TARGET) < 0.005
    assert abs(shares["remote"] - REMOTE_TARGET) < 0.005
    assert abs(shares["onsite"] - ONSITE_TARGET) < 0.005

    pre = epi.beta_total(shocks.policy_lambda("PreLockdown", calib), epi_cal)
    print(f"pre-lockdown beta components: w={pre.work:.4f} s={pre.school:.4f} "
          f"c={pre.consumption:.4f} T={pre.transport:.4f} h={pre.home:.4f} "
          f"total={pre.total:.6f}")
    for val, ref in ((pre.work, 0.29), (pre.school, 0.28),
                     (pre.consumption, 0.16), (pre.transport, 0.06),
                     (pre.home, 0.21)):
        assert abs(val - ref) <= 0.005, (val, ref)

    lock = epi.beta_total(shocks.policy_lambda("Lockdown", calib), epi_cal)
    r0_lock_raw = epi_cal.r0_pre * lock.total
    print(f"lockdown unrescaled R0: {r0_lock_raw:.4f} (target ~0.9)")
    for scen in analysis.REPORT_SCENARIOS:
        est = epi.r0_estimate(shocks.policy_lambda(scen, calib), epi_cal, calib)
        print(f"  {scen:32s} rescaled={est.r0:.3f} unrescaled={est.r0_unrescaled:.3f}")
    est_open = epi.r0_estimate(shocks.policy_lambda("Open", calib), epi_cal, calib)
    assert 1.40 <= est_open.r0 <= 1.70, est_open.r0
    assert 0.80 <= r0_lock_raw <= 1.05, r0_lock_raw

    m_check = economy.c0.sum() / economy.l0.sum()
    print(f"m = total consumption / total labor = {m_check:.6f}")
    assert abs(m_check - M_SHARE) < 1e-9
    colsums = economy.A.sum(axis=0)
    print(f"A column sums: max={colsums.max():.4f}")

    xiL = shocks.lockdown_income_factor(economy, calib)
    print(f"first-order labor income drop: {2 * (1 - xiL):.4f} (xi_L={xiL:.4f})")

    series = engine.run_simulation(
        economy, ds.criticality, ds.targets, ds.params,
        shocks.build_schedule(economy, calib, ds.params, "Lockdown", 180), 180)
    drift = abs(series.x_tot[0] - economy.x0.sum()) / economy.x0.sum()
    print(f"day-0 output: {series.x_tot[0]:.6f} (drift {drift:.2e}); "
          f"lockdown output day 61: {series.x_tot[61] / series.x_tot[0]:.4f}, "
          f"day 180: {series.x_tot[180] / series.x_tot[0]:.4f}")


def main():
    economy = build_economy()
    ratings = build_criticality()
    eta = solve_eta()
    write_csvs(economy, ratings, eta)
    print(f"wrote datasets to {OUT}")
    diagnostics()


if __name__ == "__main__":
    main()
