// Console entry point: wires the session, monitor feed and renderers.

import { ApiClient } from "./api.js";
import { MonitorFeed } from "./monitor.js";
import { drawPlots } from "./plots.js";
import { renderBanner, renderMatrix, renderPresets, renderScalers } from "./render.js";
import { autoRetry, UiSession } from "./session.js";

function apiBase(): string {
  const params = new URLSearchParams(location.search);
  return params.get("api") ?? "http://127.0.0.1:8316";
}

export function start(root: Document = document): void {
  const banner = root.getElementById("banner")!;
  const matrixEl = root.getElementById("matrix")!;
  const scalersEl = root.getElementById("scalers")!;
  const presetsEl = root.getElementById("presets")!;
  const canvas = root.getElementById("plots") as HTMLCanvasElement;

  const api = new ApiClient(apiBase());
  const session = new UiSession(api);
  const feed = new MonitorFeed(api.monitorUrl());

  session.onChange(() => {
    renderBanner(banner, session);
    renderMatrix(matrixEl, session);
    renderScalers(scalersEl, session);
    renderPresets(presetsEl, session);
  });
  feed.onUpdate(() => drawPlots(canvas, feed));

  void session.loadState().then((ok) => {
    if (!ok) autoRetry(session);
  });
  feed.connect();

  // poll the preset bank: recalls elsewhere (CLI, another console) should
  // show up without a manual refresh
  setInterval(() => void session.loadState(), 5000);
}

if (typeof document !== "undefined" && document.getElementById("banner")) {
  start();
}
