import type {
  ScenarioDefinition,
  SimulateResponse,
} from "../src/types.js";

export const DEFINITIONS: ScenarioDefinition[] = [
  {
    id: "Lockdown",
    description: "only essential on-site work and consumption",
    open_industries: [],
    schools_open: false,
    onsite_consumption_open: false,
    home_distancing: true,
  },
  {
    id: "ManufConstruction",
    description: "agriculture through construction reopen",
    open_industries: ["A01", "B", "C20", "F"],
    schools_open: false,
    onsite_consumption_open: false,
    home_distancing: true,
  },
  {
    id: "AllExceptConsumerFacing",
    description: "all but retail, hospitality, other services",
    open_industries: ["A01", "B", "C20", "F", "K64", "Q"],
    schools_open: false,
    onsite_consumption_open: false,
    home_distancing: true,
  },
  {
    id: "AllExceptConsumerFacingSchools",
    description: "as before with schools",
    open_industries: ["A01", "B", "C20", "F", "K64", "Q"],
    schools_open: true,
    onsite_consumption_open: false,
    home_distancing: true,
  },
  {
    id: "Open",
    description: "all industries open",
    open_industries: ["A01", "B", "C20", "F", "K64", "Q", "G47", "I", "R_S"],
    schools_open: true,
    onsite_consumption_open: true,
    home_distancing: true,
  },
  {
    id: "PreLockdown",
    description: "fully open, no distancing",
    open_industries: ["A01", "B", "C20", "F", "K64", "Q", "G47", "I", "R_S"],
    schools_open: true,
    onsite_consumption_open: true,
    home_distancing: false,
  },
];

export const CODES = ["A01", "B", "C20", "F", "K64", "Q", "G47", "I", "R_S"];

/** Deterministic pseudo-response with awkward float values. */
export function makeResponse(
  scenario: string,
  r0: number,
  va: number,
): SimulateResponse {
  const days = [0, 1, 2, 3, 4];
  const wiggle = (base: number): number[] =>
    days.map((d) => base * (1 - 0.01 * d * (1 + r0 / 10)));
  return {
    scenario,
    series: {
      codes: CODES,
      days,
      aggregates: {
        x_tot: wiggle(100.0000000123),
        l_tot: wiggle(29.2682926845),
        pi_tot: wiggle(7.4926829228),
        c_tot: wiggle(24.0),
        c_d_tot: wiggle(24.0),
        va_tot: wiggle(36.7609756073),
        xi: days.map(() => 1),
      },
      industries: {
        x: days.map(() => CODES.map((_, i) => 10 + i)),
        l: days.map(() => CODES.map((_, i) => 2 + i)),
        c: days.map(() => CODES.map((_, i) => 1 + i)),
        f: days.map(() => CODES.map((_, i) => 1 + i)),
      },
    },
    beta: {
      work: 0.29 * (r0 / 2.6),
      school: 0.28189 * (r0 / 2.6),
      consumption: 0.15688 * (r0 / 2.6),
      transport: 0.0586971 * (r0 / 2.6),
      home: 0.2124361 * (r0 / 2.6),
      total: r0 / 2.6,
      r0,
      r0_sd: 0.2 * r0,
    },
    r0,
    r0_sd: 0.2 * r0,
    r0_unrescaled: r0 * 1.4634,
    va_change_pp: va,
  };
}

export const SCENARIO_RESPONSES: Record<string, SimulateResponse> = {
  Lockdown: makeResponse("Lockdown", 0.62, 0),
  ManufConstruction: makeResponse("ManufConstruction", 0.6457587752044354, 3.9751120988176245),
  AllExceptConsumerFacing: makeResponse("AllExceptConsumerFacing", 0.6913505413852925, 6.791390409279782),
  AllExceptConsumerFacingSchools: makeResponse("AllExceptConsumerFacingSchools", 1.105434037079292, 6.791390409279782),
  Open: makeResponse("Open", 1.4151905025500744, 10.245759158938334),
  PreLockdown: makeResponse("PreLockdown", 2.6000000000000005, 22.8618648566936),
};
