/** Scenario drafts: what the analyst edits in the explorer.
 *
 * A draft mirrors server-side validation and serializes to the POST
 * /simulate body exactly; deserializing that body yields the same draft
 * (loss-free round trip). A pristine draft (no edits on top of its base
 * scenario) serializes to the named-scenario form.
 */

import type {
  ScenarioDefinition,
  SimulateRequestBody,
} from "./types.js";

export interface ScenarioDraft {
  name: string;
  baseScenario: string;
  /** True while the draft matches its base scenario's definition. */
  pristine: boolean;
  openIndustries: Set<string>;
  schoolsOpen: boolean;
  homeDistancing: boolean;
  onsiteConsumptionOpen: boolean;
  /** Parameter sliders; only keys the user touched are sent. */
  params: {
    tau?: number;
    delta_s_save?: number;
    b?: number;
    prod_fn?: string;
    cons_fn?: string;
  };
  horizon: number;
}

export const DEFAULT_HORIZON = 180;

const SLIDER_BOUNDS: Record<string, [number, number]> = {
  tau: [1, 60],
  delta_s_save: [0, 1],
  b: [0, 1],
};

/** Field-level validation mirroring the server's 422 rules. */
export function validateDraft(draft: ScenarioDraft): Record<string, string> {
  const errors: Record<string, string> = {};
  for (const [key, [lo, hi]] of Object.entries(SLIDER_BOUNDS)) {
    const value = draft.params[key as "tau" | "delta_s_save" | "b"];
    if (value !== undefined && (value < lo || value > hi)) {
      errors[key] = `${key} must lie in [${lo}, ${hi}]`;
    }
  }
  if (draft.horizon < 1 || draft.horizon > 2000) {
    errors.horizon = "horizon must lie in [1, 2000]";
  }
  return errors;
}

export function draftFromScenario(
  def: ScenarioDefinition,
  name?: string,
): ScenarioDraft {
  return {
    name: name ?? def.id,
    baseScenario: def.id,
    pristine: true,
    openIndustries: new Set(def.open_industries),
    schoolsOpen: def.schools_open,
    homeDistancing: def.home_distancing,
    onsiteConsumptionOpen: def.onsite_consumption_open,
    params: {},
    horizon: DEFAULT_HORIZON,
  };
}

/** Exact request body the draft stands for. */
export function toRequestBody(draft: ScenarioDraft): SimulateRequestBody {
  const params: Record<string, number | string> = {};
  for (const [key, value] of Object.entries(draft.params)) {
    if (value !== undefined) params[key] = value;
  }
  if (draft.pristine) {
    return { scenario: draft.baseScenario, params, horizon: draft.horizon };
  }
  return {
    custom: {
      open_industries: [...draft.openIndustries].sort(),
      schools_open: draft.schoolsOpen,
      home_distancing: draft.homeDistancing,
      onsite_consumption_open: draft.onsiteConsumptionOpen,
    },
    params,
    horizon: draft.horizon,
  };
}

/** Inverse of toRequestBody for named and custom bodies alike. */
export function fromRequestBody(
  body: SimulateRequestBody,
  definitions: ScenarioDefinition[],
  name = "restored",
): ScenarioDraft {
  if (body.scenario !== undefined) {
    const def = definitions.find((d) => d.id === body.scenario);
    if (!def) throw new Error(`unknown scenario ${body.scenario}`);
    const draft = draftFromScenario(def, name);
    draft.params = { ...body.params } as ScenarioDraft["params"];
    draft.horizon = body.horizon;
    return draft;
  }
  if (body.custom === undefined) throw new Error("body has neither form");
  return {
    name,
    baseScenario: "Custom",
    pristine: false,
    openIndustries: new Set(body.custom.open_industries),
    schoolsOpen: body.custom.schools_open,
    homeDistancing: body.custom.home_distancing,
    onsiteConsumptionOpen: body.custom.onsite_consumption_open,
    params: { ...body.params } as ScenarioDraft["params"],
    horizon: body.horizon,
  };
}

/** Toggle one industry open/closed; the draft becomes custom. */
export function toggleIndustry(
  draft: ScenarioDraft,
  code: string,
): ScenarioDraft {
  const open = new Set(draft.openIndustries);
  if (open.has(code)) open.delete(code);
  else open.add(code);
  return { ...draft, pristine: false, openIndustries: open };
}

export function setSwitch(
  draft: ScenarioDraft,
  key: "schoolsOpen" | "homeDistancing" | "onsiteConsumptionOpen",
  value: boolean,
): ScenarioDraft {
  return { ...draft, [key]: value, pristine: false };
}
