// Fixed-capacity ring for monitor time series: a long session must not
// grow memory without bound, and reconnect gaps stay visible as nulls.

export interface TimePoint {
  t: number;
  value: number | null; // null marks a connection gap
}

export class RingBuffer {
  private buf: TimePoint[];
  private head = 0;
  private count = 0;

  constructor(public readonly capacity: number) {
    if (capacity < 1) throw new Error("capacity must be >= 1");
    this.buf = new Array(capacity);
  }

  push(point: TimePoint): void {
    this.buf[(this.head + this.count) % this.capacity] = point;
    if (this.count < this.capacity) {
      this.count += 1;
    } else {
      this.head = (this.head + 1) % this.capacity;
    }
  }

  get length(): number {
    return this.count;
  }

  last(): TimePoint | undefined {
    if (this.count === 0) return undefined;
    return this.buf[(this.head + this.count - 1) % this.capacity];
  }

  /** Oldest to newest. */
  toArray(): TimePoint[] {
    const out: TimePoint[] = new Array(this.count);
    for (let k = 0; k < this.count; k++) {
      out[k] = this.buf[(this.head + k) % this.capacity];
    }
    return out;
  }

  clear(): void {
    this.head = 0;
    this.count = 0;
  }
}
