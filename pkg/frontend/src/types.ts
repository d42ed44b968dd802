/** Wire types of the simulation service (mirrors the HTTP/JSON API). */

export interface BetaBreakdown {
  work: number;
  school: number;
  consumption: number;
  transport: number;
  home: number;
  total: number;
  r0: number;
  r0_sd: number;
}

export interface SeriesPayload {
  codes: string[];
  days: number[];
  aggregates: {
    x_tot: number[];
    l_tot: number[];
    pi_tot: number[];
    c_tot: number[];
    c_d_tot: number[];
    va_tot: number[];
    xi: number[];
  };
  industries: {
    x: number[][];
    l: number[][];
    c: number[][];
    f: number[][];
  };
}

export interface SimulateResponse {
  scenario: string;
  series: SeriesPayload;
  beta: BetaBreakdown;
  r0: number;
  r0_sd: number;
  r0_unrescaled: number;
  va_change_pp: number;
}

export interface ScenarioDefinition {
  id: string;
  description: string;
  open_industries: string[];
  schools_open: boolean;
  onsite_consumption_open: boolean;
  home_distancing: boolean;
}

export interface CalibrationSummary {
  n_industries: number;
  codes: string[];
  workforce_shares: { essential: number; remote: number; onsite: number };
  params: Record<string, number | string | boolean>;
}

export interface CustomPolicyBody {
  open_industries: string[];
  schools_open: boolean;
  home_distancing: boolean;
  onsite_consumption_open: boolean;
}

/** Exact POST /simulate request body. */
export interface SimulateRequestBody {
  scenario?: string;
  custom?: CustomPolicyBody;
  params: Record<string, number | string>;
  horizon: number;
}

export const BETA_PARTS = [
  "work",
  "school",
  "consumption",
  "transport",
  "home",
] as const;

export type BetaPart = (typeof BETA_PARTS)[number];
