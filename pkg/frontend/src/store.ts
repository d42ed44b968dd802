/** Explorer state: the current draft, saved drafts and their responses.
 *
 * DOM-free so the request discipline is testable: every edit triggers
 * exactly one new simulate request, cancelling the previous one for the
 * same slot; stale responses never overwrite newer ones.
 */

import type { ApiClient } from "./api.js";
import {
  draftFromScenario,
  toRequestBody,
  toggleIndustry,
  setSwitch,
  validateDraft,
  type ScenarioDraft,
} from "./draft.js";
import type {
  ScenarioDefinition,
  SimulateResponse,
} from "./types.js";

export interface SavedDraft {
  draft: ScenarioDraft;
  response: SimulateResponse;
}

export type Listener = () => void;

export class ExplorerStore {
  definitions: ScenarioDefinition[] = [];
  codes: string[] = [];
  draft: ScenarioDraft | null = null;
  current: SimulateResponse | null = null;
  lockdownBaseline: SimulateResponse | null = null;
  saved: SavedDraft[] = [];
  errors: Record<string, string> = {};
  lastError: string | null = null;
  pending = false;

  private listeners: Listener[] = [];
  private requestSeq = 0;

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  async init(): Promise<void> {
    const [definitions, calibration] = await Promise.all([
      this.api.scenarios(),
      this.api.calibration(),
    ]);
    this.definitions = definitions;
    this.codes = calibration.codes;
    const lockdown = definitions.find((d) => d.id === "Lockdown");
    if (!lockdown) throw new Error("service lists no Lockdown scenario");
    this.lockdownBaseline = await this.api.simulate(
      toRequestBody(draftFromScenario(lockdown)),
      "baseline",
    );
    await this.selectScenario("Lockdown");
  }

  /** Replace the draft and re-query (one request per edit). */
  private async apply(draft: ScenarioDraft): Promise<void> {
    this.draft = draft;
    this.errors = validateDraft(draft);
    this.lastError = null;
    if (Object.keys(this.errors).length > 0) {
      this.notify();
      return;
    }
    const seq = ++this.requestSeq;
    this.pending = true;
    this.notify();
    try {
      const response = await this.api.simulate(toRequestBody(draft));
      if (seq === this.requestSeq) {
        this.current = response;
        this.pending = false;
        this.notify();
      }
    } catch (error) {
      if ((error as Error).name === "AbortError") return; // replaced
      if (seq === this.requestSeq) {
        this.pending = false;
        this.lastError = String((error as Error).message ?? error);
        this.notify();
      }
    }
  }

  async selectScenario(id: string): Promise<void> {
    const def = this.definitions.find((d) => d.id === id);
    if (!def) throw new Error(`unknown scenario ${id}`);
    await this.apply(draftFromScenario(def));
  }

  async toggle(code: string): Promise<void> {
    if (!this.draft) return;
    await this.apply(toggleIndustry(this.draft, code));
  }

  async flip(
    key: "schoolsOpen" | "homeDistancing" | "onsiteConsumptionOpen",
    value: boolean,
  ): Promise<void> {
    if (!this.draft) return;
    await this.apply(setSwitch(this.draft, key, value));
  }

  async setParam(
    key: keyof ScenarioDraft["params"] | "horizon",
    value: number | string,
  ): Promise<void> {
    if (!this.draft) return;
    const draft: ScenarioDraft =
      key === "horizon"
        ? { ...this.draft, horizon: Number(value) }
        : {
            ...this.draft,
            params: { ...this.draft.params, [key]: value },
          };
    await this.apply(draft);
  }

  saveCurrent(name?: string): void {
    if (!this.draft || !this.current) return;
    const label = name ?? `${this.draft.name} #${this.saved.length + 1}`;
    this.saved.push({
      draft: { ...this.draft, name: label },
      response: this.current,
    });
    this.notify();
  }

  removeSaved(index: number): void {
    this.saved.splice(index, 1);
    this.notify();
  }
}
