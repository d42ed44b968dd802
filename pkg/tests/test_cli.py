import csv
import json
from pathlib import Path

import pytest

from reopen.cli import main, replay_manifest


def run_cli(*argv):
    return main(list(argv))


class TestSimulate:
    def test_row_count_matches_horizon(self, tmp_path):
        out = tmp_path / "run"
        assert run_cli("simulate", "--scenario", "lockdown", "--horizon",
                       "180", "--out", str(out)) == 0
        with (out / "series.csv").open() as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 182  # header + day 0 .. day 180
        assert (out / "series.json").is_file()
        assert (out / "series.png").stat().st_size > 0

    def test_manifest_replay_is_byte_identical(self, tmp_path):
        first = tmp_path / "a"
        again = tmp_path / "b"
        assert run_cli("simulate", "--scenario", "open", "--horizon", "90",
                       "--out", str(first)) == 0
        replay_manifest(first / "simulate_manifest.json", again)
        for name in ("series.csv", "series.json", "series.png"):
            assert (first / name).read_bytes() == (again / name).read_bytes()

    def test_unknown_scenario_is_config_error(self, tmp_path):
        assert run_cli("simulate", "--scenario", "bogus",
                       "--out", str(tmp_path)) == 1

    def test_missing_data_dir_is_data_error(self, tmp_path):
        assert run_cli("simulate", "--data-dir", str(tmp_path / "nope"),
                       "--out", str(tmp_path)) == 2

    def test_bad_flags_exit_one(self):
        assert run_cli("not-a-command") == 1


class TestScenarios:
    def test_report_covers_named_scenarios(self, tmp_path):
        out = tmp_path / "rep"
        assert run_cli("scenarios", "--out", str(out)) == 0
        with (out / "scenarios.csv").open() as fh:
            rows = list(csv.DictReader(fh))
        names = [r["scenario"] for r in rows]
        assert names == ["Lockdown", "ManufConstruction",
                         "AllExceptConsumerFacing",
                         "AllExceptConsumerFacingSchools", "Open",
                         "PreLockdown"]
        assert (out / "scenarios.png").stat().st_size > 0
        doc = json.loads((out / "scenarios.json").read_text())
        assert len(doc) == 6


class TestEpiR0:
    def test_open_scenario_value(self, tmp_path, capsys):
        assert run_cli("epi-r0", "--scenario", "open",
                       "--out", str(tmp_path)) == 0
        payload = json.loads((tmp_path / "epi_r0.json").read_text())
        assert 1.40 <= payload["r0"] <= 1.70
        assert payload["r0_sd"] == pytest.approx(0.2 * payload["r0"])
        printed = json.loads(capsys.readouterr().out)
        assert printed == payload


class TestSynth:
    def test_generated_dataset_is_loadable(self, tmp_path):
        data_dir = tmp_path / "synth"
        assert run_cli("synth", "--n", "6", "--seed", "9",
                       "--out", str(data_dir)) == 0
        out = tmp_path / "run"
        assert run_cli("simulate", "--data-dir", str(data_dir), "--horizon",
                       "30", "--out", str(out)) == 0
        with (out / "series.csv").open() as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 32

    def test_env_var_fallback(self, tmp_path, monkeypatch):
        data_dir = tmp_path / "synth"
        run_cli("synth", "--n", "4", "--seed", "2", "--out", str(data_dir))
        monkeypatch.setenv("REOPEN_DATA_DIR", str(data_dir))
        from reopen.bundle import resolve_data_dir
        assert resolve_data_dir() == data_dir


class TestSensitivityAndCompare:
    def test_sensitivity_outputs(self, tmp_path):
        data_dir = tmp_path / "synth"
        run_cli("synth", "--n", "5", "--seed", "4", "--out", str(data_dir))
        out = tmp_path / "sens"
        assert run_cli("sensitivity", "--data-dir", str(data_dir), "--runs",
                       "10", "--sigma", "0.1", "--horizon", "40",
                       "--out", str(out)) == 0
        with (out / "ensemble.csv").open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 41
        assert all(float(r["q25"]) <= float(r["q75"]) + 1e-12 for r in rows)

    def test_compare_io_outputs(self, tmp_path):
        data_dir = tmp_path / "synth"
        run_cli("synth", "--n", "5", "--seed", "4", "--out", str(data_dir))
        out = tmp_path / "cio"
        assert run_cli("compare-io", "--data-dir", str(data_dir),
                       "--out", str(out)) == 0
        with (out / "compare_io.csv").open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 5
        for r in rows:
            assert abs(float(r["x_sim_demand_shocks"])
                       / float(r["x_leontief"]) - 1) < 0.25
