import { describe, expect, it } from "vitest";

import {
  extractDisplayedFigures,
  renderComparisonTable,
  renderR0Bars,
  renderSeriesChart,
} from "../src/charts.js";
import { BETA_PARTS } from "../src/types.js";
import { SCENARIO_RESPONSES } from "./fixtures.js";

const SIX = Object.keys(SCENARIO_RESPONSES);

describe("figure rendering round-trips API values", () => {
  it("comparison table carries the exact response figures for all six scenarios", () => {
    const rows = SIX.map((id) => ({
      label: id,
      response: SCENARIO_RESPONSES[id],
    }));
    const html = renderComparisonTable(rows);
    const figures = extractDisplayedFigures(html);
    expect(figures.length).toBe(6);
    SIX.forEach((id, k) => {
      // exact equality: the rendered value IS the API value
      expect(figures[k].r0).toBe(SCENARIO_RESPONSES[id].r0);
      expect(figures[k].va).toBe(SCENARIO_RESPONSES[id].va_change_pp);
    });
  });

  it("stacked bars carry exact r0, sd and per-channel beta values", () => {
    const rows = SIX.map((id) => ({
      label: id,
      response: SCENARIO_RESPONSES[id],
    }));
    const svg = renderR0Bars(rows);
    for (const id of SIX) {
      const response = SCENARIO_RESPONSES[id];
      expect(svg).toContain(`data-r0="${response.r0}"`);
      expect(svg).toContain(`data-sd="${response.r0_sd}"`);
      for (const part of BETA_PARTS) {
        expect(svg).toContain(`data-value="${response.beta[part]}"`);
      }
    }
    // five segments per scenario bar
    const segments = svg.match(/class="seg /g) ?? [];
    expect(segments.length).toBe(6 * 5);
  });

  it("series chart draws current and baseline trajectories", () => {
    const current = SCENARIO_RESPONSES.Open;
    const baseline = SCENARIO_RESPONSES.Lockdown;
    const svg = renderSeriesChart(current, baseline);
    expect(svg).toContain('data-name="output"');
    expect(svg).toContain('data-name="consumption"');
    expect(svg).toContain('data-name="lockdown output"');
    expect(svg).toContain(`data-days="${current.series.days.length}"`);
    const polylines = svg.match(/<polyline/g) ?? [];
    expect(polylines.length).toBe(4);
  });

  it("renders without a baseline", () => {
    const svg = renderSeriesChart(SCENARIO_RESPONSES.Lockdown, null);
    const polylines = svg.match(/<polyline/g) ?? [];
    expect(polylines.length).toBe(2);
  });

  it("escapes labels", () => {
    const html = renderComparisonTable([
      { label: 'x"<script>', response: SCENARIO_RESPONSES.Lockdown },
    ]);
    expect(html).not.toContain("<script>");
  });
});
