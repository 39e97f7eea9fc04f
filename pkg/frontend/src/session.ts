// Console session: the edit buffer over the server's MappingState.
//
// The engine only accepts whole-state commits (one atomic snapshot per
// PUT), so every edit here follows the same shape: copy the last known
// server state, apply the change to the copy, PUT the whole document, then
// re-render from the server's response. A rejected commit leaves the
// server untouched; the buffer rolls back and the error surfaces inline.
// Commits are serialized through a queue so two quick clicks cannot
// interleave their read-modify-write cycles.

import { ApiClient, ApiError } from "./api.js";
import type { MappingState, Preset, ScalerField } from "./types.js";

export type SessionListener = (session: UiSession) => void;

function deepCopy<T>(value: T): T {
  return JSON.parse(JSON.stringify(value));
}

export class UiSession {
  /** Last state confirmed by the server; null until first load. */
  state: MappingState | null = null;
  /** Previous confirmed state, kept so undo stays trivial. */
  previous: MappingState | null = null;
  connected = false;
  lastError: string | null = null;
  selectedPresetId: string | null = null;

  private listeners: SessionListener[] = [];
  private commitChain: Promise<void> = Promise.resolve();

  constructor(public api: ApiClient) {}

  onChange(listener: SessionListener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify() {
    for (const l of this.listeners) l(this);
  }

  async loadState(): Promise<boolean> {
    try {
      this.state = await this.api.getMapping();
      this.connected = true;
      this.lastError = null;
    } catch (err) {
      this.connected = false;
      this.lastError = err instanceof Error ? err.message : String(err);
    }
    this.notify();
    return this.connected;
  }

  /** Serialize commits; each edit sees the state its predecessor left. */
  private commit(edit: (draft: MappingState) => void): Promise<boolean> {
    const run = async (): Promise<boolean> => {
      if (!this.state) return false;
      const base = this.state;
      const draft = deepCopy(base);
      edit(draft);
      try {
        const confirmed = await this.api.putMapping(draft);
        this.previous = base;
        this.state = confirmed;
        this.connected = true;
        this.lastError = null;
        this.notify();
        return true;
      } catch (err) {
        // no partial commit: buffer stays on the last confirmed state
        if (err instanceof ApiError && err.status === 422) {
          this.lastError = err.detail;
        } else {
          this.lastError = err instanceof Error ? err.message : String(err);
          this.connected = false;
        }
        this.notify();
        return false;
      }
    };
    const result = this.commitChain.then(run, run);
    this.commitChain = result.then(() => undefined);
    return result;
  }

  toggleCell(i: number, j: number): Promise<boolean> {
    return this.commit((draft) => {
      const row = draft.matrix.gains[i];
      if (!row || j >= row.length) throw new Error(`no cell (${i}, ${j})`);
      row[j] = row[j] > 0 ? 0 : 1;
    });
  }

  editScaler(route: number, field: ScalerField, value: number): Promise<boolean> {
    return this.commit((draft) => {
      const out = draft.outputs[route];
      if (!out) throw new Error(`no route ${route}`);
      out.scaler[field] = value;
    });
  }

  setGain(i: number, j: number, value: number): Promise<boolean> {
    return this.commit((draft) => {
      draft.matrix.gains[i][j] = value;
    });
  }

  /** Restore the previous confirmed state (one-step undo). */
  undo(): Promise<boolean> {
    const prev = this.previous;
    if (!prev) return Promise.resolve(false);
    return this.commit((draft) => {
      draft.matrix = deepCopy(prev.matrix);
      draft.outputs = deepCopy(prev.outputs);
      draft.inputs = deepCopy(prev.inputs);
    });
  }

  async savePreset(id: string): Promise<Preset | null> {
    try {
      const preset = await this.api.savePreset(id);
      await this.loadState();
      this.selectedPresetId = id;
      return preset;
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : String(err);
      this.notify();
      return null;
    }
  }

  async recall(presetId: string, rampMs: number): Promise<boolean> {
    try {
      await this.api.recallPreset(presetId, rampMs);
      this.selectedPresetId = presetId;
      this.lastError = null;
      this.notify();
      return true;
    } catch (err) {
      this.lastError =
        err instanceof ApiError && err.status === 404
          ? `unknown preset '${presetId}'`
          : err instanceof Error
            ? err.message
            : String(err);
      this.notify();
      return false;
    }
  }
}

/** Reload until the engine answers; used for the disconnected banner. */
export function autoRetry(
  session: UiSession,
  intervalMs = 2000,
  schedule: (fn: () => void, ms: number) => unknown = setTimeout,
): void {
  const tick = async () => {
    const ok = await session.loadState();
    if (!ok) schedule(tick, intervalMs);
  };
  schedule(tick, intervalMs);
}
