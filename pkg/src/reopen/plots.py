"""Figure rendering for the report paths.

Every CLI report that writes delimited output also renders a matplotlib
figure next to it; all plotting is file-based (Agg backend, no display).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

BETA_COLORS = {
    "work": "#4C72B0",
    "school": "#DD8452",
    "consumption": "#55A868",
    "transport": "#C44E52",
    "home": "#8172B3",
}


def save_series_plot(series, path, title="Simulation"):
    """Aggregate trajectories normalized to day 0."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    days = series.days
    for label, values in (("gross output", series.x_tot),
                          ("consumption", series.c_tot),
                          ("labor income", series.l_tot),
                          ("value added", series.va_tot)):
        ax.plot(days, values / values[0], label=label, lw=1.5)
    ax.set_xlabel("day")
    ax.set_ylabel("relative to steady state")
    ax.set_title(title)
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path


def save_scenario_chart(report, path):
    """Stacked reproduction-number bars with error bars, plus value-added
    bars per scenario (the trade-off chart)."""
    rows = report.rows
    labels = [r.scenario_id for r in rows]
    x = np.arange(len(rows))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(12, 4.8))

    bottom = np.zeros(len(rows))
    for part in ("work", "school", "consumption", "transport", "home"):
        seg = np.array([r.beta[part] / r.beta["total"] * r.r0 for r in rows])
        ax1.bar(x, seg, bottom=bottom, color=BETA_COLORS[part], label=part)
        bottom += seg
    ax1.errorbar(x, [r.r0 for r in rows], yerr=[2 * r.r0_sd for r in rows],
                 fmt="none", ecolor="black", capsize=3)
    ax1.axhline(1.0, color="grey", ls="--", lw=1)
    ax1.set_xticks(x)
    ax1.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax1.set_ylabel("reproduction number")
    ax1.legend(frameon=False, fontsize=8)

    ax2.bar(x, [r.va_change_pp for r in rows], color="#937860")
    ax2.set_xticks(x)
    ax2.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax2.set_ylabel("value-added boost vs lockdown (pp)")
    ax2.grid(axis="y", alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path


def save_ensemble_plot(summary, path):
    """Median and quantile bands of aggregate output."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    days = summary.days
    ax.fill_between(days, summary.q025, summary.q975, color="#55A868",
                    alpha=0.25, label="95% band")
    ax.fill_between(days, summary.q25, summary.q75, color="#4C72B0",
                    alpha=0.35, label="interquartile")
    ax.plot(days, summary.median, color="black", lw=1.2, label="median")
    ax.plot(days, summary.base, color="#C44E52", lw=1.2, label="default run")
    ax.set_xlabel("day")
    ax.set_ylabel("aggregate output")
    ax.set_title(f"{summary.n_runs} runs, sigma={summary.sigma}")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path


def save_io_comparison_plot(codes, x0, x_model, x_classical, label, path):
    """Per-industry relative change: engine steady state vs classical model."""
    fig, ax = plt.subplots(figsize=(11, 4.5))
    x = np.arange(len(codes))
    width = 0.4
    ax.bar(x - width / 2, 100 * (np.asarray(x_model) / x0 - 1), width,
           label="simulation")
    ax.bar(x + width / 2, 100 * (np.asarray(x_classical) / x0 - 1), width,
           label=label)
    ax.set_xticks(x)
    ax.set_xticklabels(codes, rotation=90, fontsize=6)
    ax.set_ylabel("output change (%)")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path
