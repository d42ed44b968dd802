"""Command-line interface.

Subcommands: ``simulate`` (one scenario), ``scenarios`` (trade-off report),
``sensitivity`` (perturbation ensemble), ``compare-io`` (classical
input-output comparison), ``epi-r0`` (transmission breakdown), ``synth``
(synthetic dataset generator) and ``serve`` (HTTP service). Report commands
write CSV/JSON plus a rendered figure, and a manifest that reproduces the
run bit for bit.

Exit codes: 1 invalid configuration or flags, 2 data validation failure,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import analysis, engine, epi, plots, shocks
from .bundle import RunManifest, Timer, load_dataset, new_manifest
from .data import (DataValidationError, generate_synthetic_economy,
                   write_io_table, write_pandemic_calibration)
from .engine import NumericalError

logger = logging.getLogger(__name__)

EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    """Bad flags or configuration (exit code 1)."""


def _scenario(name):
    try:
        return shocks.canonical_scenario(name)
    except DataValidationError as exc:
        raise ConfigError(str(exc)) from exc


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for data problems.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _common_flags(p):
    p.add_argument("--data-dir", default=None,
                   help="dataset directory (default: $REOPEN_DATA_DIR or bundled)")
    p.add_argument("--config", default=None, help="parameter config file")
    p.add_argument("--scenario", default="lockdown", help="named scenario")
    p.add_argument("--prod-fn", default=None,
                   help="production function override")
    p.add_argument("--cons-fn", default=None,
                   help="consumption function override")
    p.add_argument("--horizon", type=int, default=None, help="days to simulate")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--strict", action="store_true",
                   help="fail on accounting warnings")


def build_parser():
    parser = _Parser(prog="reopen",
                     description="Production-network pandemic simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
            ("simulate", "run one scenario and export the daily series"),
            ("scenarios", "trade-off report over the named scenarios"),
            ("sensitivity", "shock-perturbation ensemble"),
            ("compare-io", "steady-state comparison against Leontief/Ghosh"),
            ("epi-r0", "transmission-rate breakdown for a scenario"),
            ("synth", "generate a synthetic dataset directory"),
            ("serve", "start the HTTP service")):
        p = sub.add_parser(name, help=help_text)
        _common_flags(p)
        if name == "sensitivity":
            p.add_argument("--sigma", type=float, default=0.2)
            p.add_argument("--runs", type=int, default=1000)
            p.add_argument("--mode", default="both",
                           choices=analysis.ENSEMBLE_MODES)
        if name == "synth":
            p.add_argument("--n", type=int, default=10,
                           help="number of industries")
        if name == "serve":
            p.add_argument("--host", default="127.0.0.1")
            p.add_argument("--port", type=int, default=8000)
    return parser


def _overrides(args):
    out = {}
    if args.prod_fn:
        out["prod_fn"] = args.prod_fn
    if args.cons_fn:
        out["cons_fn"] = args.cons_fn
    return out


def _load(args):
    return load_dataset(args.data_dir, params_path=args.config,
                        strict=args.strict, **_overrides(args))


def _finish(manifest, outputs, elapsed, out_dir, name):
    manifest.outputs = [str(p) for p in outputs]
    manifest.elapsed_s = elapsed
    path = Path(out_dir) / f"{name}_manifest.json"
    manifest.to_json(path)
    for p in outputs + [path]:
        print(p)


def cmd_simulate(args, dataset=None):
    ds = dataset or _load(args)
    horizon = args.horizon if args.horizon is not None else 180
    scenario = _scenario(args.scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = new_manifest("simulate", ds, scenario=scenario, seed=args.seed,
                            horizon=horizon)
    with Timer() as t:
        schedule = shocks.build_schedule(ds.economy, ds.calibration, ds.params,
                                         scenario, horizon)
        series = engine.run_simulation(ds.economy, ds.criticality, ds.targets,
                                       ds.params, schedule, horizon)
        csv_path = out / "series.csv"
        json_path = out / "series.json"
        png_path = out / "series.png"
        series.to_csv(csv_path)
        series.to_json(json_path)
        plots.save_series_plot(series, png_path, title=scenario)
    _finish(manifest, [csv_path, json_path, png_path], t.elapsed, out, "simulate")
    return 0


def cmd_scenarios(args, dataset=None):
    ds = dataset or _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = new_manifest("scenarios", ds, horizon=args.horizon)
    with Timer() as t:
        report = analysis.scenario_report(
            analysis.REPORT_SCENARIOS, ds.economy, ds.criticality,
            ds.calibration, ds.targets, ds.params, ds.epi, horizon=args.horizon)
        csv_path = out / "scenarios.csv"
        with csv_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["scenario", "r0", "r0_sd", "r0_unrescaled",
                        "beta_work", "beta_school", "beta_consumption",
                        "beta_transport", "beta_home", "va_change_pp",
                        "gdp_pct"])
            for r in report.rows:
                w.writerow([r.scenario_id, repr(float(r.r0)),
                            repr(float(r.r0_sd)), repr(float(r.r0_unrescaled))]
                           + [repr(float(r.beta[k])) for k in
                              ("work", "school", "consumption", "transport",
                               "home")]
                           + [repr(float(r.va_change_pp)),
                              repr(float(r.gdp_pct))])
        json_path = out / "scenarios.json"
        with json_path.open("w") as fh:
            json.dump(report.to_dicts(), fh, indent=2)
        png_path = out / "scenarios.png"
        plots.save_scenario_chart(report, png_path)
    _finish(manifest, [csv_path, json_path, png_path], t.elapsed, out, "scenarios")
    return 0


def cmd_sensitivity(args, dataset=None):
    ds = dataset or _load(args)
    horizon = args.horizon if args.horizon is not None else 180
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = new_manifest("sensitivity", ds, scenario=args.mode,
                            seed=args.seed, horizon=horizon)
    with Timer() as t:
        summary = analysis.perturbation_ensemble(
            ds.economy, ds.criticality, ds.calibration, ds.targets, ds.params,
            sigma=args.sigma, n_runs=args.runs, seed=args.seed, mode=args.mode,
            horizon=horizon)
        csv_path = out / "ensemble.csv"
        with csv_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "q025", "q25", "median", "q75", "q975", "base"])
            for k in range(len(summary.days)):
                w.writerow([int(summary.days[k])] +
                           [repr(float(v[k])) for v in
                            (summary.q025, summary.q25, summary.median,
                             summary.q75, summary.q975, summary.base)])
        png_path = out / "ensemble.png"
        plots.save_ensemble_plot(summary, png_path)
    _finish(manifest, [csv_path, png_path], t.elapsed, out, "sensitivity")
    return 0


def cmd_compare_io(args, dataset=None):
    ds = dataset or _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = new_manifest("compare-io", ds)
    with Timer() as t:
        x_dem, x_leo, capped = analysis.leontief_comparison_run(
            ds.economy, ds.criticality, ds.calibration, ds.targets, ds.params)
        x_sup, x_ghosh = analysis.ghosh_comparison_run(
            ds.economy, ds.criticality, ds.calibration, ds.targets, ds.params)
        csv_path = out / "compare_io.csv"
        with csv_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["code", "x0", "x_sim_demand_shocks", "x_leontief",
                        "capacity_capped", "x_sim_supply_shocks", "x_ghosh"])
            for k, code in enumerate(ds.economy.codes):
                w.writerow([code, repr(float(ds.economy.x0[k])),
                            repr(float(x_dem[k])), repr(float(x_leo[k])),
                            int(capped[k]), repr(float(x_sup[k])),
                            repr(float(x_ghosh[k]))])
        png_path = out / "compare_io.png"
        plots.save_io_comparison_plot(ds.economy.codes, ds.economy.x0, x_dem,
                                      x_leo, "Leontief", png_path)
    _finish(manifest, [csv_path, png_path], t.elapsed, out, "compare_io")
    return 0


def cmd_epi_r0(args, dataset=None):
    ds = dataset or _load(args)
    scenario = _scenario(args.scenario)
    lam = shocks.policy_lambda(scenario, ds.calibration)
    est = epi.r0_estimate(lam, ds.epi, ds.calibration,
                          adult_norm=ds.params.mu_s_adult_norm)
    payload = {"scenario": scenario, "r0": est.r0, "r0_sd": est.r0_sd,
               "r0_unrescaled": est.r0_unrescaled,
               "beta": est.breakdown.to_dict()}
    text = json.dumps(payload, indent=2)
    print(text)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "epi_r0.json").write_text(text)
    return 0


def cmd_synth(args):
    economy, criticality, calibration, targets = generate_synthetic_economy(
        args.n, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_io_table(economy, out / "io_table.csv")
    with (out / "criticality.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["input"] + list(economy.codes))
        for i, code in enumerate(economy.codes):
            w.writerow([code] + [f"{v:g}" for v in criticality.ratings[i]])
    write_pandemic_calibration(calibration, out / "shocks.csv")
    with (out / "inventory_ratios.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["code", "ratio_monthly"])
        for k, code in enumerate(economy.codes):
            w.writerow([code, repr(float(targets.n_days[k] / 30.0))])
    epi_cal = epi.synthetic_epi_calibration(economy, seed=args.seed)
    with (out / "epi_industry.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["code", "exposure", "proximity", "eta", "b_c"])
        b_w = epi_cal.b_w
        for k, code in enumerate(economy.codes):
            w.writerow([code, repr(float(b_w[k])), repr(float(b_w[k])),
                        repr(float(epi_cal.eta[k])),
                        repr(float(epi_cal.b_c[k]))])
    from .bundle import bundled_dir
    for name in ("epi_places.csv", "epi_params.cfg"):
        (out / name).write_text((bundled_dir() / name).read_text())
    print(out)
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    ds = _load(args)
    app = create_app(ds)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def replay_manifest(path, out_dir):
    """Re-run a recorded simulate command; outputs are byte-identical."""
    manifest = RunManifest.from_json(path)
    if manifest.command != "simulate":
        raise DataValidationError(f"can only replay simulate runs, "
                                  f"got {manifest.command!r}")
    from .bundle import data_digests
    if data_digests(manifest.data_dir) != manifest.digests:
        logger.warning("input files changed since the manifest was recorded")
    ds = load_dataset(manifest.data_dir)
    args = argparse.Namespace(out=str(out_dir), horizon=manifest.horizon,
                              scenario=manifest.scenario, seed=manifest.seed)
    return cmd_simulate(args, dataset=ds)


_COMMANDS = {
    "simulate": cmd_simulate,
    "scenarios": cmd_scenarios,
    "sensitivity": cmd_sensitivity,
    "compare-io": cmd_compare_io,
    "epi-r0": cmd_epi_r0,
    "synth": cmd_synth,
    "serve": cmd_serve,
}


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        logger.error("invalid configuration: %s", exc)
        return EXIT_CONFIG
    except DataValidationError as exc:
        logger.error("data validation: %s", exc)
        return EXIT_DATA
    except FileNotFoundError as exc:
        logger.error("missing file: %s", exc)
        return EXIT_DATA
    except (NumericalError, FloatingPointError, np.linalg.LinAlgError) as exc:
        logger.error("numerical failure: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
