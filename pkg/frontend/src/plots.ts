// Canvas time-series plots for the monitor feed. One strip per descriptor,
// axis fixed to the descriptor's value range, gaps drawn as breaks.

import type { MonitorFeed } from "./monitor.js";
import { PLOT_SERIES } from "./types.js";

const STRIP_H = 64;
const PAD = 4;

export function drawPlots(canvas: HTMLCanvasElement, feed: MonitorFeed): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const width = canvas.width;
  canvas.height = PLOT_SERIES.length * STRIP_H;
  ctx.clearRect(0, 0, width, canvas.height);

  PLOT_SERIES.forEach((spec, idx) => {
    const top = idx * STRIP_H;
    const ring = feed.series.get(spec.key)!;
    const points = ring.toArray();

    ctx.strokeStyle = "#333";
    ctx.strokeRect(0.5, top + 0.5, width - 1, STRIP_H - 1);
    ctx.fillStyle = "#888";
    ctx.font = "10px monospace";
    const latest = feed.latest;
    const readout = latest === null ? "—" :
      readoutValue(spec.key, feed).toFixed(3);
    ctx.fillText(`${spec.label}  ${readout}`, 6, top + 12);

    if (points.length < 2) return;
    const t0 = points[0].t;
    const t1 = points[points.length - 1].t;
    const span = Math.max(t1 - t0, 1);
    ctx.strokeStyle = "#2c8";
    ctx.beginPath();
    let pen = false;
    for (const p of points) {
      if (p.value === null) {
        pen = false; // reconnect gap: lift the pen
        continue;
      }
      const x = PAD + ((p.t - t0) / span) * (width - 2 * PAD);
      const norm = (p.value - spec.min) / (spec.max - spec.min);
      const y = top + STRIP_H - PAD - norm * (STRIP_H - 2 * PAD);
      if (pen) {
        ctx.lineTo(x, y);
      } else {
        ctx.moveTo(x, y);
        pen = true;
      }
    }
    ctx.stroke();
  });
}

function readoutValue(key: string, feed: MonitorFeed): number {
  const snap = feed.latest!;
  if (key === "motion") return snap.motion.global_motion;
  return (snap as unknown as Record<string, number>)[key];
}
