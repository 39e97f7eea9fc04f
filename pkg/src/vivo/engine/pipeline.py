"""Per-frame descriptor pipeline and the live stream engine.

``process_frame`` is a pure function: frame in, descriptor vector and OSC
messages out. ``StreamEngine`` wraps it with the stateful parts — one-frame
motion history, newest-wins frame dropping, bounded OSC queues, metrics and
the atomically swappable mapping snapshot the control API edits.
"""

from __future__ import annotations

import ctypes
import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

from .. import detail as detail_mod
from ..frames import Frame, mean_luminance
from ..mapping import MappingState
from ..motion import FlowParams, MotionStats, horn_schunck, motion_stats
from ..osc import Endpoint, OscMessage, OscSender, encode, encode_bundle
from ..sharpness import sharpness
from ..warmth import QuantizationParams, warmth
from .config import EngineConfig

log = logging.getLogger("vivo.engine")

ZERO_MOTION = MotionStats(mean_h=0.0, mean_v=0.0, global_motion=0.0,
                          pan=(0.0, 0.0),
                          channel_weights=(0.25, 0.25, 0.25, 0.25))

_allocator_tuned = False


def tune_allocator():
    """Keep megabyte-scale analysis temporaries inside the malloc arena.

    Each frame allocates several MB of short-lived numpy buffers. glibc's
    dynamic mmap threshold routes those through mmap/munmap, and the
    page-fault churn roughly doubles frame latency with heavy jitter.
    Raising the thresholds lets the arena recycle the buffers. No-op off
    glibc; disable with VIVO_NO_MALLOC_TUNING=1.
    """
    global _allocator_tuned
    if _allocator_tuned or os.environ.get("VIVO_NO_MALLOC_TUNING"):
        return
    _allocator_tuned = True
    try:
        libc = ctypes.CDLL("libc.so.6", use_errno=True)
        libc.mallopt(-3, 512 * 1024 * 1024)  # M_MMAP_THRESHOLD
        libc.mallopt(-1, 512 * 1024 * 1024)  # M_TRIM_THRESHOLD
    except (OSError, AttributeError):
        pass


@dataclass(frozen=True)
class DescriptorFrame:
    """Named descriptor values for one frame, all bounded reals."""

    timestamp_ms: float
    warmth: float
    sharpness: float
    detail: float
    detail_bands: tuple[float, ...]
    luminance: float
    motion: MotionStats

    def named_values(self) -> dict[str, float]:
        return {
            "warmth": self.warmth,
            "sharpness": self.sharpness,
            "detail": self.detail,
            "luminance": self.luminance,
            "motion": self.motion.global_motion,
        }


# Descriptors within one frame are independent; fanning the heavy ones out
# across this small pool and rejoining before emission keeps the frame
# budget on narrow machines without changing any computed value.
_POOL = ThreadPoolExecutor(max_workers=2, thread_name_prefix="descriptor")


def process_frame(f: Frame, prev: Optional[Frame], cfg: EngineConfig,
                  mapping: MappingState) -> tuple[DescriptorFrame, list[OscMessage]]:
    """Analyze one frame and derive its outgoing OSC messages.

    Disabled descriptors report 0 so the message layout stays constant.
    Motion is zero when there is no previous frame. Raw values go out on the
    mapping's input addresses, mapped synthesis parameters on the output
    addresses, in configuration order — replaying a stream with the same
    config reproduces the same message sequence.
    """
    a = cfg.analysis
    # Materialize the shared per-frame caches before fanning out, so the
    # worker thread only reads them.
    f.planes
    f.gray
    f.channel_max
    f.channel_min

    def _motion_and_detail():
        if a.motion and prev is not None:
            field = horn_schunck(prev, f, FlowParams(a.flow_alpha, a.flow_iterations))
            motion = motion_stats(field, a.max_displacement)
        else:
            motion = ZERO_MOTION
        if a.detail:
            detail_v, bands_v = detail_mod.detail(
                f, [b.to_band() for b in a.bands], a.detail_gain)
        else:
            detail_v, bands_v = 0.0, [0.0] * len(a.bands)
        lum = mean_luminance(f) if a.luminance else 0.0
        return motion, detail_v, bands_v, lum

    side = _POOL.submit(_motion_and_detail)
    warmth_v = warmth(f, QuantizationParams(a.h_bins, a.s_bins, a.v_bins)) if a.warmth else 0.0
    sharp_v = sharpness(f) if a.sharpness else 0.0
    motion, detail_v, bands_v, lum_v = side.result()

    desc = DescriptorFrame(
        timestamp_ms=f.timestamp_ms,
        warmth=warmth_v,
        sharpness=sharp_v,
        detail=detail_v,
        detail_bands=tuple(bands_v),
        luminance=lum_v,
        motion=motion,
    )
    values = desc.named_values()
    messages = [OscMessage(inp.address, (values[inp.name],))
                for inp in mapping.inputs]
    messages += [OscMessage(address, (value,))
                 for address, value in mapping.apply(
                     [values[inp.name] for inp in mapping.inputs])]
    return desc, messages


class PipelineMetrics:
    """Latency/throughput counters; all monotone within a run."""

    BUCKETS_MS = (1, 2, 5, 10, 20, 33, 66)

    def __init__(self, keep: int = 10000):
        self._lock = threading.Lock()
        self._samples: list[float] = []
        self._keep = keep
        self.histogram = [0] * (len(self.BUCKETS_MS) + 1)
        self.processed = 0
        self.dropped_frames = 0
        self.started = time.monotonic()

    def record(self, latency_ms: float):
        with self._lock:
            self.processed += 1
            self._samples.append(latency_ms)
            if len(self._samples) > self._keep:
                del self._samples[: len(self._samples) - self._keep]
            for i, edge in enumerate(self.BUCKETS_MS):
                if latency_ms < edge:
                    self.histogram[i] += 1
                    break
            else:
                self.histogram[-1] += 1

    def count_dropped(self, n: int = 1):
        with self._lock:
            self.dropped_frames += n

    def percentile(self, q: float) -> float:
        with self._lock:
            if not self._samples:
                return 0.0
            ordered = sorted(self._samples)
            idx = min(len(ordered) - 1, int(q / 100.0 * len(ordered)))
            return ordered[idx]

    @property
    def achieved_fps(self) -> float:
        elapsed = time.monotonic() - self.started
        return self.processed / elapsed if elapsed > 0 else 0.0

    def summary(self) -> dict:
        return {
            "processed": self.processed,
            "dropped_frames": self.dropped_frames,
            "achieved_fps": round(self.achieved_fps, 2),
            "latency_ms": {
                "p50": round(self.percentile(50), 3),
                "p95": round(self.percentile(95), 3),
                "max": round(max(self._samples), 3) if self._samples else 0.0,
            },
            "histogram_edges_ms": list(self.BUCKETS_MS),
            "histogram": list(self.histogram),
        }


class _LatestSlot:
    """One-frame hand-off buffer: writers overwrite, readers take newest."""

    def __init__(self):
        self._cond = threading.Condition()
        self._frame: Optional[Frame] = None
        self._eof = False
        self.overwritten = 0

    def put(self, frame: Frame):
        with self._cond:
            if self._frame is not None:
                self.overwritten += 1
            self._frame = frame
            self._cond.notify()

    def close(self):
        with self._cond:
            self._eof = True
            self._cond.notify()

    def take(self) -> Optional[Frame]:
        with self._cond:
            while self._frame is None and not self._eof:
                self._cond.wait(timeout=0.1)
            frame, self._frame = self._frame, None
            return frame


class StreamEngine:
    """Live pipeline: ordered analysis, OSC emission, swappable mapping.

    The mapping attribute is replaced wholesale (never mutated), so the
    processing loop always sees a complete, consistent control surface;
    an API edit takes effect on the next frame.
    """

    def __init__(self, cfg: EngineConfig, mapping: MappingState | None = None):
        tune_allocator()
        self.cfg = cfg
        self._mapping = mapping if mapping is not None else cfg.resolve_mapping()
        self.metrics = PipelineMetrics()
        self.latest: Optional[DescriptorFrame] = None
        self.senders = [
            OscSender(Endpoint(t.host, t.port, "send"), cfg.osc_queue_size)
            for t in cfg.osc
        ]
        self._prev: Optional[Frame] = None
        self._stop = threading.Event()

    @property
    def mapping(self) -> MappingState:
        return self._mapping

    @mapping.setter
    def mapping(self, state: MappingState):
        self._mapping = state

    def stop(self):
        self._stop.set()

    def process(self, frame: Frame) -> DescriptorFrame:
        """Analyze one frame in stream order and emit its messages."""
        if self._prev is not None and (
                self._prev.width != frame.width or self._prev.height != frame.height):
            log.warning("frame size changed %dx%d -> %dx%d, resetting stream",
                        self._prev.width, self._prev.height,
                        frame.width, frame.height)
            self._prev = None
        start = time.perf_counter()
        desc, messages = process_frame(frame, self._prev, self.cfg, self._mapping)
        self.metrics.record((time.perf_counter() - start) * 1000.0)
        self._emit(messages)
        self._prev = frame
        self.latest = desc
        return desc

    def _emit(self, messages: list[OscMessage]):
        if not messages:
            return
        datagram = (encode_bundle(messages) if len(messages) > 1
                    else encode(messages[0]))
        for sender in self.senders:
            sender.send_raw(datagram)

    def run(self, frames: Iterable[Frame]) -> dict:
        """Consume a frame stream until EOF or stop(); returns the summary.

        A reader thread keeps only the newest pending frame, so when
        analysis falls behind the input rate, stale frames are dropped
        instead of queueing without bound.
        """
        slot = _LatestSlot()

        def _reader():
            try:
                for frame in frames:
                    if self._stop.is_set():
                        break
                    slot.put(frame)
            finally:
                slot.close()

        reader = threading.Thread(target=_reader, daemon=True, name="frame-reader")
        reader.start()
        try:
            while not self._stop.is_set():
                frame = slot.take()
                if frame is None:
                    break
                self.process(frame)
                dropped = slot.overwritten - self.metrics.dropped_frames
                if dropped > 0:
                    self.metrics.count_dropped(dropped)
        finally:
            self._stop.set()
            reader.join(timeout=1.0)
            self.close()
        return self.metrics.summary()

    def queue_depth(self) -> int:
        return max((s.queue_depth for s in self.senders), default=0)

    def osc_counters(self) -> dict:
        return {
            "sent": sum(s.sent for s in self.senders),
            "dropped_packets": sum(s.dropped for s in self.senders),
            "errors": sum(s.errors for s in self.senders),
            "queue_depth": self.queue_depth(),
        }

    def close(self):
        for sender in self.senders:
            sender.close()
