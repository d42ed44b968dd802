"""Dataset resolution: bundled calibration files, user data directories and
run manifests.

A data directory holds ``io_table.csv``, ``criticality.csv``, ``shocks.csv``,
``inventory_ratios.csv``, ``epi_industry.csv``, ``epi_places.csv``,
``epi_params.cfg`` and optionally ``econ_params.cfg``. The packaged
``datasets/`` directory ships a calibration shaped like the 55-industry UK
economy; ``REOPEN_DATA_DIR`` or ``--data-dir`` points anywhere else.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path

from . import data as data_mod
from .data import DataValidationError, load_econ_params
from .epi import load_epi_calibration

ENV_DATA_DIR = "REOPEN_DATA_DIR"

FILES = {
    "io_table": "io_table.csv",
    "criticality": "criticality.csv",
    "shocks": "shocks.csv",
    "inventory_ratios": "inventory_ratios.csv",
    "epi_industry": "epi_industry.csv",
    "epi_places": "epi_places.csv",
    "epi_params": "epi_params.cfg",
}
ECON_PARAMS_FILE = "econ_params.cfg"


def bundled_dir():
    return Path(__file__).resolve().parent / "datasets"


def resolve_data_dir(data_dir=None):
    """Explicit argument, then $REOPEN_DATA_DIR, then the packaged dataset."""
    if data_dir is not None:
        return Path(data_dir)
    env = os.environ.get(ENV_DATA_DIR)
    if env:
        return Path(env)
    return bundled_dir()


@dataclass(frozen=True)
class Dataset:
    """Everything a run needs, loaded and cross-validated."""

    data_dir: Path
    economy: object
    criticality: object
    calibration: object
    targets: object
    epi: object
    params: object

    @property
    def codes(self):
        return self.economy.codes


def load_dataset(data_dir=None, params_path=None, strict=False, **param_overrides):
    """Load and cross-validate all files of a data directory."""
    root = resolve_data_dir(data_dir)
    if not root.is_dir():
        raise DataValidationError(f"data directory {root} does not exist")
    for name in FILES.values():
        if not (root / name).is_file():
            raise DataValidationError(f"missing {name} in {root}")
    economy = data_mod.load_io_table(root / FILES["io_table"], strict=strict)
    criticality = data_mod.load_criticality(root / FILES["criticality"],
                                            expected_codes=economy.codes)
    _check_criticality_counts(root, criticality)
    calibration = data_mod.load_pandemic_calibration(root / FILES["shocks"],
                                                     expected_codes=economy.codes)
    targets = data_mod.load_inventory_ratios(root / FILES["inventory_ratios"],
                                             expected_codes=economy.codes)
    epi = load_epi_calibration(root / FILES["epi_industry"],
                               root / FILES["epi_places"],
                               root / FILES["epi_params"], codes=economy.codes)
    if params_path is None and (root / ECON_PARAMS_FILE).is_file():
        params_path = root / ECON_PARAMS_FILE
    params = load_econ_params(params_path, **param_overrides)
    return Dataset(data_dir=root, economy=economy, criticality=criticality,
                   calibration=calibration, targets=targets, epi=epi,
                   params=params)


def _check_criticality_counts(root, criticality):
    """Warn when a user-supplied 55-industry rating matrix deviates from the
    bundled per-industry rating counts (the published tallies)."""
    if root == bundled_dir():
        return
    try:
        reference = data_mod.load_criticality(bundled_dir() / FILES["criticality"])
    except Exception:
        return
    if criticality.codes != reference.codes:
        return
    row, col = (dict(zip(reference.codes, map(tuple, c)))
                for c in reference.counts())
    data_mod.validate_criticality_counts(criticality, row, col)


# ---------------------------------------------------------------------------
# Run manifests
# ---------------------------------------------------------------------------

def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def data_digests(data_dir):
    root = Path(data_dir)
    digests = {}
    for name in sorted(set(FILES.values()) | {ECON_PARAMS_FILE}):
        p = root / name
        if p.is_file():
            digests[name] = _sha256(p)
    return digests


@dataclass
class RunManifest:
    """Record of one run: input digests, parameters and outputs. Re-running
    a manifest reproduces the output files byte for byte."""

    run_id: str
    command: str
    data_dir: str
    digests: dict
    params: dict
    scenario: str
    seed: int | None
    horizon: int | None
    outputs: list
    elapsed_s: float

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.__dict__, fh, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls(**json.load(fh))


def new_manifest(command, dataset, scenario=None, seed=None, horizon=None):
    digests = data_digests(dataset.data_dir)
    payload = json.dumps([command, str(dataset.data_dir), digests, scenario,
                          seed, horizon], sort_keys=True)
    run_id = hashlib.sha256(payload.encode()).hexdigest()[:16]
    params = {k: getattr(dataset.params, k)
              for k in dataset.params.__dataclass_fields__}
    return RunManifest(run_id=run_id, command=command,
                       data_dir=str(dataset.data_dir), digests=digests,
                       params=params, scenario=scenario or "", seed=seed,
                       horizon=horizon, outputs=[], elapsed_s=0.0)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False
