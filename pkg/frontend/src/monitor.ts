// Live descriptor monitor over the engine's WebSocket.
//
// Snapshots land in per-descriptor ring buffers. Incoming rate is capped
// client-side at 30 Hz: plotting faster steals exactly the frame budget
// the engine needs. A dropped socket reconnects with backoff and writes a
// null gap marker into every series so plots show the hole.

import { RingBuffer } from "./ringbuffer.js";
import { PLOT_SERIES, seriesValue, type DescriptorSnapshot } from "./types.js";

export type MonitorListener = (m: MonitorFeed) => void;

interface WebSocketLike {
  onopen: ((ev: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: ((ev: unknown) => void) | null;
  onerror: ((ev: unknown) => void) | null;
  close(): void;
}

export interface MonitorOptions {
  capacity?: number;
  maxRateHz?: number;
  reconnectMs?: number;
  wsFactory?: (url: string) => WebSocketLike;
  now?: () => number;
  schedule?: (fn: () => void, ms: number) => unknown;
}

export class MonitorFeed {
  readonly series = new Map<string, RingBuffer>();
  latest: DescriptorSnapshot | null = null;
  connected = false;
  received = 0;
  ratePlotted = 0;
  gaps = 0;

  private ws: WebSocketLike | null = null;
  private closed = false;
  private lastAccepted = -Infinity;
  private listeners: MonitorListener[] = [];

  private readonly maxRateHz: number;
  private readonly reconnectMs: number;
  private readonly wsFactory: (url: string) => WebSocketLike;
  private readonly now: () => number;
  private readonly schedule: (fn: () => void, ms: number) => unknown;

  constructor(
    private url: string,
    opts: MonitorOptions = {},
  ) {
    const capacity = opts.capacity ?? 600; // 20 s at the 30 Hz cap
    for (const s of PLOT_SERIES) this.series.set(s.key, new RingBuffer(capacity));
    this.maxRateHz = opts.maxRateHz ?? 30;
    this.reconnectMs = opts.reconnectMs ?? 1000;
    this.wsFactory = opts.wsFactory ?? ((u) => new WebSocket(u) as unknown as WebSocketLike);
    this.now = opts.now ?? (() => performance.now());
    this.schedule = opts.schedule ?? setTimeout;
  }

  onUpdate(listener: MonitorListener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify() {
    for (const l of this.listeners) l(this);
  }

  connect(): void {
    if (this.closed) return;
    const ws = this.wsFactory(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.connected = true;
      this.notify();
    };
    ws.onmessage = (ev) => this.ingest(ev.data);
    ws.onerror = () => {
      /* onclose follows and handles the retry */
    };
    ws.onclose = () => {
      const wasConnected = this.connected;
      this.connected = false;
      this.ws = null;
      if (wasConnected) this.markGap();
      this.notify();
      if (!this.closed) this.schedule(() => this.connect(), this.reconnectMs);
    };
  }

  /** Parse one snapshot; drop it if it beats the client-side rate cap. */
  ingest(data: string): void {
    let snap: DescriptorSnapshot;
    try {
      snap = JSON.parse(data);
    } catch {
      return; // not a snapshot
    }
    this.received += 1;
    this.latest = snap; // numeric readouts always match the last snapshot
    const t = this.now();
    if (t - this.lastAccepted < 1000 / this.maxRateHz) {
      this.notify();
      return;
    }
    this.lastAccepted = t;
    this.ratePlotted += 1;
    for (const s of PLOT_SERIES) {
      this.series.get(s.key)!.push({ t, value: seriesValue(snap, s.key) });
    }
    this.notify();
  }

  private markGap(): void {
    this.gaps += 1;
    const t = this.now();
    for (const s of PLOT_SERIES) this.series.get(s.key)!.push({ t, value: null });
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}
