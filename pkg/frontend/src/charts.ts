/** Pure SVG/HTML renderers.
 *
 * Every figure carries the raw response values in data attributes
 * (data-r0, data-va, ...) so displayed numbers are verifiably identical to
 * what the API returned; the visible text is a formatted copy.
 */

import { BETA_PARTS, type SimulateResponse } from "./types.js";

export const BETA_COLORS: Record<string, string> = {
  work: "#4C72B0",
  school: "#DD8452",
  consumption: "#55A868",
  transport: "#C44E52",
  home: "#8172B3",
};

const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/"/g, "&quot;");

export interface LabelledResponse {
  label: string;
  response: SimulateResponse;
}

/**
 * Stacked reproduction-number bars, one per saved draft/scenario, split
 * into the five activity channels, with two-standard-error bars.
 */
export function renderR0Bars(
  rows: LabelledResponse[],
  width = 560,
  height = 300,
): string {
  const margin = { top: 16, right: 12, bottom: 44, left: 42 };
  const innerW = width - margin.left - margin.right;
  const innerH = height - margin.top - margin.bottom;
  const maxR0 = Math.max(1.2, ...rows.map((r) => r.response.r0 + 2 * r.response.r0_sd));
  const y = (v: number): number => margin.top + innerH * (1 - v / maxR0);
  const slot = innerW / Math.max(rows.length, 1);
  const barW = slot * 0.6;

  const parts: string[] = [];
  rows.forEach((row, i) => {
    const { beta, r0, r0_sd } = row.response;
    const x0 = margin.left + i * slot + (slot - barW) / 2;
    let acc = 0;
    for (const part of BETA_PARTS) {
      const segment = (beta[part] / beta.total) * r0;
      const yTop = y(acc + segment);
      parts.push(
        `<rect class="seg seg-${part}" x="${x0.toFixed(2)}" y="${yTop.toFixed(2)}" ` +
          `width="${barW.toFixed(2)}" height="${(y(acc) - yTop).toFixed(2)}" ` +
          `fill="${BETA_COLORS[part]}" data-part="${part}" data-value="${beta[part]}"/>`,
      );
      acc += segment;
    }
    const xm = x0 + barW / 2;
    parts.push(
      `<line class="err" x1="${xm}" x2="${xm}" y1="${y(r0 - 2 * r0_sd).toFixed(2)}" ` +
        `y2="${y(r0 + 2 * r0_sd).toFixed(2)}" stroke="black" data-sd="${r0_sd}"/>`,
    );
    parts.push(
      `<g class="bar" data-label="${esc(row.label)}" data-r0="${r0}" data-sd="${r0_sd}">` +
        `<text x="${xm}" y="${height - 26}" text-anchor="middle" font-size="10">${esc(row.label)}</text>` +
        `<text x="${xm}" y="${height - 12}" text-anchor="middle" font-size="10">${r0.toFixed(2)}</text></g>`,
    );
  });
  const one = y(1.0);
  parts.push(
    `<line x1="${margin.left}" x2="${width - margin.right}" y1="${one.toFixed(2)}" ` +
      `y2="${one.toFixed(2)}" stroke="#888" stroke-dasharray="4 3"/>`,
  );
  parts.push(
    `<text x="${margin.left - 6}" y="${one + 3}" text-anchor="end" font-size="9">1</text>`,
  );
  return (
    `<svg viewBox="0 0 ${width} ${height}" class="r0-chart" role="img">` +
    parts.join("") +
    `</svg>`
  );
}

/**
 * Aggregate trajectories (output and realized consumption, normalized to
 * day 0) for the current draft against the lockdown baseline.
 */
export function renderSeriesChart(
  current: SimulateResponse,
  baseline: SimulateResponse | null,
  width = 560,
  height = 260,
): string {
  const margin = { top: 10, right: 10, bottom: 24, left: 40 };
  const innerW = width - margin.left - margin.right;
  const innerH = height - margin.top - margin.bottom;

  const lines: { values: number[]; color: string; dash: string; name: string }[] = [];
  const norm = (values: number[]): number[] => values.map((v) => v / values[0]);
  lines.push({
    values: norm(current.series.aggregates.x_tot),
    color: "#4C72B0",
    dash: "",
    name: "output",
  });
  lines.push({
    values: norm(current.series.aggregates.c_tot),
    color: "#55A868",
    dash: "",
    name: "consumption",
  });
  if (baseline) {
    lines.push({
      values: norm(baseline.series.aggregates.x_tot),
      color: "#4C72B0",
      dash: "5 4",
      name: "lockdown output",
    });
    lines.push({
      values: norm(baseline.series.aggregates.c_tot),
      color: "#55A868",
      dash: "5 4",
      name: "lockdown consumption",
    });
  }
  const all = lines.flatMap((l) => l.values);
  const lo = Math.min(...all, 1) - 0.02;
  const hi = Math.max(...all, 1) + 0.02;
  const n = Math.max(...lines.map((l) => l.values.length));
  const px = (k: number): number => margin.left + (innerW * k) / Math.max(n - 1, 1);
  const py = (v: number): number => margin.top + innerH * (1 - (v - lo) / (hi - lo));

  const paths = lines
    .map((line) => {
      const points = line.values
        .map((v, k) => `${px(k).toFixed(1)},${py(v).toFixed(1)}`)
        .join(" ");
      return (
        `<polyline fill="none" stroke="${line.color}" stroke-width="1.4" ` +
        `stroke-dasharray="${line.dash}" data-name="${line.name}" points="${points}"/>`
      );
    })
    .join("");
  const axis =
    `<line x1="${margin.left}" x2="${width - margin.right}" y1="${py(1).toFixed(1)}" ` +
    `y2="${py(1).toFixed(1)}" stroke="#ccc"/>` +
    `<text x="${margin.left - 5}" y="${py(1) + 3}" text-anchor="end" font-size="9">1.0</text>`;
  return (
    `<svg viewBox="0 0 ${width} ${height}" class="series-chart" role="img" ` +
    `data-days="${current.series.days.length}">` +
    axis +
    paths +
    `</svg>`
  );
}

/** Side-by-side comparison table of saved drafts. */
export function renderComparisonTable(rows: LabelledResponse[]): string {
  const header =
    "<tr><th>draft</th><th>scenario</th><th>R0</th><th>±2sd</th>" +
    "<th>VA boost vs lockdown (pp)</th></tr>";
  const body = rows
    .map(({ label, response }) => {
      return (
        `<tr class="draft-row" data-label="${esc(label)}" data-r0="${response.r0}" ` +
        `data-va="${response.va_change_pp}">` +
        `<td>${esc(label)}</td><td>${esc(response.scenario)}</td>` +
        `<td class="num r0">${response.r0.toFixed(3)}</td>` +
        `<td class="num">${(2 * response.r0_sd).toFixed(3)}</td>` +
        `<td class="num va">${response.va_change_pp.toFixed(2)}</td></tr>`
      );
    })
    .join("");
  return `<table class="compare">${header}${body}</table>`;
}

/** Extract the raw figures a rendered fragment displays (for tests). */
export function extractDisplayedFigures(html: string): {
  r0: number;
  va: number;
}[] {
  const out: { r0: number; va: number }[] = [];
  const re = /data-r0="([^"]+)" data-va="([^"]+)"/g;
  let match: RegExpExecArray | null;
  while ((match = re.exec(html)) !== null) {
    out.push({ r0: Number(match[1]), va: Number(match[2]) });
  }
  return out;
}
