"""HTTP/WebSocket control API over a running engine.

The browser console (or any HTTP client) edits the mapping here. Edits are
whole-state: GET the mapping, change it client-side, PUT it back. The
engine swaps the snapshot atomically, so the frame pipeline never observes
a half-applied edit. Preset recall ramps run server-side and re-snapshot
the state every tick.
"""

from __future__ import annotations

import asyncio
import threading
import time

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from ..mapping import (
    MappingState,
    Preset,
    ramp_progress,
    recall_preset,
    save_preset,
    store_preset,
)
from .pipeline import DescriptorFrame, StreamEngine


class MotionModel(BaseModel):
    mean_h: float
    mean_v: float
    global_motion: float
    pan: tuple[float, float]
    channel_weights: tuple[float, float, float, float]


class DescriptorFrameModel(BaseModel):
    timestamp_ms: float
    warmth: float
    sharpness: float
    detail: float
    detail_bands: tuple[float, ...]
    luminance: float
    motion: MotionModel

    @classmethod
    def from_frame(cls, d: DescriptorFrame) -> "DescriptorFrameModel":
        return cls(
            timestamp_ms=d.timestamp_ms,
            warmth=d.warmth,
            sharpness=d.sharpness,
            detail=d.detail,
            detail_bands=d.detail_bands,
            luminance=d.luminance,
            motion=MotionModel(
                mean_h=d.motion.mean_h,
                mean_v=d.motion.mean_v,
                global_motion=d.motion.global_motion,
                pan=d.motion.pan,
                channel_weights=d.motion.channel_weights,
            ),
        )


class SavePresetRequest(BaseModel):
    id: str = Field(min_length=1)


class RecallStatus(BaseModel):
    preset_id: str
    ramp_ms: float
    started: bool = True


class _RampRunner:
    """Background preset recall: re-snapshots the mapping until t reaches 1."""

    TICK_S = 1.0 / 60.0

    def __init__(self, engine: StreamEngine):
        self._engine = engine
        self._lock = threading.Lock()
        self._generation = 0

    def start(self, preset: Preset, ramp_ms: float):
        with self._lock:
            self._generation += 1
            generation = self._generation
        base = self._engine.mapping
        if ramp_ms <= 0:
            self._engine.mapping = recall_preset(base, preset, 1.0)
            return
        thread = threading.Thread(
            target=self._run, args=(base, preset, ramp_ms, generation),
            daemon=True, name="preset-ramp",
        )
        thread.start()

    def _cancelled(self, generation: int) -> bool:
        with self._lock:
            return generation != self._generation

    def _run(self, base: MappingState, preset: Preset, ramp_ms: float,
             generation: int):
        started = time.monotonic()
        while not self._cancelled(generation):
            t = ramp_progress((time.monotonic() - started) * 1000.0, ramp_ms)
            try:
                self._engine.mapping = recall_preset(base, preset, t)
            except ValueError:
                # Mid-ramp interpolation can transiently violate scaler
                # invariants (e.g. crossing ranges); skip the tick.
                pass
            if t >= 1.0:
                return
            time.sleep(self.TICK_S)


def build_app(engine: StreamEngine, monitor_rate_hz: float | None = None) -> FastAPI:
    app = FastAPI(title="vivo control API", version="0.1.0")
    # The browser console is served as static files from its own origin.
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    ramps = _RampRunner(engine)
    rate = monitor_rate_hz or engine.cfg.monitor_rate_hz

    @app.get("/api/mapping", response_model=MappingState)
    def get_mapping():
        return engine.mapping

    @app.put("/api/mapping", response_model=MappingState)
    def put_mapping(state: MappingState):
        engine.mapping = state
        return engine.mapping

    @app.get("/api/presets", response_model=list[Preset])
    def list_presets():
        return list(engine.mapping.presets)

    @app.post("/api/presets", response_model=Preset)
    def save(req: SavePresetRequest):
        preset = save_preset(engine.mapping, req.id)
        engine.mapping = store_preset(engine.mapping, preset)
        return preset

    @app.post("/api/presets/{preset_id}/recall", response_model=RecallStatus)
    def recall(preset_id: str, ramp_ms: float = 0.0):
        preset = engine.mapping.preset_by_id(preset_id)
        if preset is None:
            raise HTTPException(status_code=404, detail="unknown preset")
        ramps.start(preset, ramp_ms)
        return RecallStatus(preset_id=preset_id, ramp_ms=ramp_ms)

    @app.get("/api/metrics")
    def metrics():
        summary = engine.metrics.summary()
        summary["osc"] = engine.osc_counters()
        return summary

    @app.websocket("/api/monitor")
    async def monitor(ws: WebSocket):
        await ws.accept()
        interval = 1.0 / rate
        try:
            while True:
                latest = engine.latest
                if latest is not None:
                    await ws.send_text(
                        DescriptorFrameModel.from_frame(latest).model_dump_json()
                    )
                await asyncio.sleep(interval)
        except (WebSocketDisconnect, RuntimeError):
            return

    return app


class ApiServer:
    """uvicorn in a daemon thread beside the frame loop."""

    def __init__(self, app: FastAPI, host: str, port: int):
        import uvicorn

        self._config = uvicorn.Config(app, host=host, port=port,
                                      log_level="warning", loop="asyncio")
        self.server = uvicorn.Server(self._config)
        self._thread = threading.Thread(target=self.server.run, daemon=True,
                                        name="control-api")

    def start(self, wait_ready: float = 5.0):
        self._thread.start()
        deadline = time.monotonic() + wait_ready
        while not self.server.started and time.monotonic() < deadline:
            if not self._thread.is_alive():
                raise RuntimeError("control API failed to start")
            time.sleep(0.02)

    def stop(self):
        self.server.should_exit = True
        self._thread.join(timeout=5.0)
