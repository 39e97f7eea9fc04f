// Thin fetch client for the engine control API. Whole-state reads and
// writes only; the server is the single source of truth.

import type { MappingState, Preset } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`API ${status}: ${detail}`);
  }
}

async function raise(res: Response): Promise<never> {
  let detail = res.statusText;
  try {
    const body = await res.json();
    if (typeof body.detail === "string") {
      detail = body.detail;
    } else if (Array.isArray(body.detail)) {
      // pydantic validation errors: [{loc: [...], msg: ...}, ...]
      detail = body.detail
        .map((e: { loc?: unknown[]; msg?: string }) =>
          `${(e.loc ?? []).slice(1).join(".")}: ${e.msg ?? "invalid"}`)
        .join("; ");
    } else if (body.detail !== undefined) {
      detail = JSON.stringify(body.detail);
    }
  } catch {
    // keep statusText
  }
  throw new ApiError(res.status, detail);
}

export class ApiClient {
  constructor(
    public baseUrl: string,
    private fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  async getMapping(): Promise<MappingState> {
    const res = await this.fetchFn(`${this.baseUrl}/api/mapping`);
    if (!res.ok) await raise(res);
    return res.json();
  }

  async putMapping(state: MappingState): Promise<MappingState> {
    const res = await this.fetchFn(`${this.baseUrl}/api/mapping`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(state),
    });
    if (!res.ok) await raise(res);
    return res.json();
  }

  async listPresets(): Promise<Preset[]> {
    const res = await this.fetchFn(`${this.baseUrl}/api/presets`);
    if (!res.ok) await raise(res);
    return res.json();
  }

  async savePreset(id: string): Promise<Preset> {
    const res = await this.fetchFn(`${this.baseUrl}/api/presets`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ id }),
    });
    if (!res.ok) await raise(res);
    return res.json();
  }

  async recallPreset(id: string, rampMs: number): Promise<void> {
    const res = await this.fetchFn(
      `${this.baseUrl}/api/presets/${encodeURIComponent(id)}/recall?ramp_ms=${rampMs}`,
      { method: "POST" },
    );
    if (!res.ok) await raise(res);
  }

  monitorUrl(): string {
    return this.baseUrl.replace(/^http/, "ws") + "/api/monitor";
  }
}
