/** Thin client for the simulation service.
 *
 * No simulation math happens in the browser: every displayed number comes
 * out of these responses. Each draft slot keeps at most one request in
 * flight; an edit aborts and replaces it (last write wins).
 */

import type {
  CalibrationSummary,
  ScenarioDefinition,
  SimulateRequestBody,
  SimulateResponse,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function readError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
    else if (body.detail) detail = JSON.stringify(body.detail);
  } catch {
    /* non-JSON error body */
  }
  return new ApiError(response.status, detail);
}

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) =>
      fetch(input, init),
  ) {}

  async scenarios(): Promise<ScenarioDefinition[]> {
    const response = await this.fetchImpl(`${this.baseUrl}/scenarios`);
    if (!response.ok) throw await readError(response);
    return response.json();
  }

  async calibration(): Promise<CalibrationSummary> {
    const response = await this.fetchImpl(`${this.baseUrl}/calibration`);
    if (!response.ok) throw await readError(response);
    return response.json();
  }

  /**
   * POST /simulate for one draft slot. A new call for the same slot aborts
   * the previous one; the aborted promise rejects with AbortError.
   */
  async simulate(
    body: SimulateRequestBody,
    slot = "current",
  ): Promise<SimulateResponse> {
    this.inflight.get(slot)?.abort();
    const controller = new AbortController();
    this.inflight.set(slot, controller);
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/simulate`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
        signal: controller.signal,
      });
      if (!response.ok) throw await readError(response);
      return (await response.json()) as SimulateResponse;
    } finally {
      if (this.inflight.get(slot) === controller) {
        this.inflight.delete(slot);
      }
    }
  }
}
