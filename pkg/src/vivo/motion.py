"""Dense optical flow between consecutive frames and aggregate motion stats.

Classic global-smoothness flow estimation: image derivatives from 2x2x2
averaged forward differences, then fixed-point iterations

    u = ubar - Ix * (Ix*ubar + Iy*vbar + It) / (alpha^2 + Ix^2 + Iy^2)

with ubar/vbar the weighted 8-neighborhood averages. Signs follow image
coordinates: u < 0 moves left, u > 0 right; v < 0 up, v > 0 down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import Frame


@dataclass(frozen=True)
class FlowParams:
    alpha: float = 1.0
    iterations: int = 10

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.iterations < 1:
            raise ValueError("need at least one iteration")


@dataclass(frozen=True)
class FlowField:
    """Per-pixel velocity planes in pixels/frame, same shape as the input."""

    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class MotionStats:
    mean_h: float
    mean_v: float
    global_motion: float
    pan: tuple[float, float]
    channel_weights: tuple[float, float, float, float]


def _derivatives(prev: np.ndarray, nxt: np.ndarray):
    """Ix, Iy, It averaged over the 2x2x2 cube, borders replicated."""
    p1 = np.pad(prev, ((0, 1), (0, 1)), mode="edge")
    p2 = np.pad(nxt, ((0, 1), (0, 1)), mode="edge")
    ix = 0.25 * (p1[:-1, 1:] - p1[:-1, :-1] + p1[1:, 1:] - p1[1:, :-1]
                 + p2[:-1, 1:] - p2[:-1, :-1] + p2[1:, 1:] - p2[1:, :-1])
    iy = 0.25 * (p1[1:, :-1] - p1[:-1, :-1] + p1[1:, 1:] - p1[:-1, 1:]
                 + p2[1:, :-1] - p2[:-1, :-1] + p2[1:, 1:] - p2[:-1, 1:])
    it = 0.25 * (p2[:-1, :-1] - p1[:-1, :-1] + p2[1:, :-1] - p1[1:, :-1]
                 + p2[:-1, 1:] - p1[:-1, 1:] + p2[1:, 1:] - p1[1:, 1:])
    return ix, iy, it


def _neighborhood_average(a: np.ndarray) -> np.ndarray:
    """Weighted 8-neighborhood mean (corners 1/12, edges 1/6, center 0).

    Computed as the separable [1,2,1]x[1,2,1]/12 filter minus the center
    term; replicate borders.
    """
    p = np.pad(a, 1, mode="edge")
    sx = p[:, :-2] + 2.0 * p[:, 1:-1] + p[:, 2:]
    out = sx[:-2, :] + 2.0 * sx[1:-1, :] + sx[2:, :]
    out *= np.float32(1.0 / 12.0)
    out -= a * np.float32(1.0 / 3.0)
    return out


def horn_schunck(prev: Frame, nxt: Frame,
                 p: FlowParams = FlowParams()) -> FlowField:
    """Estimate the dense flow field carrying ``prev`` onto ``nxt``.

    Iterates in float32: the estimate is aggregated into coarse motion
    statistics, where single precision is far below the model error.
    """
    if (prev.width, prev.height) != (nxt.width, nxt.height):
        raise ValueError("frame size mismatch")
    if prev.width < 2 or prev.height < 2:
        raise ValueError("frame too small")
    ix, iy, it = _derivatives(prev.gray32, nxt.gray32)
    inv_denom = 1.0 / (np.float32(p.alpha) ** 2 + ix * ix + iy * iy)
    u = np.zeros_like(ix)
    v = np.zeros_like(ix)
    for _ in range(p.iterations):
        ubar = _neighborhood_average(u)
        vbar = _neighborhood_average(v)
        shared = (ix * ubar + iy * vbar + it) * inv_denom
        u = ubar - ix * shared
        v = vbar - iy * shared
    return FlowField(u, v)


def motion_stats(flow: FlowField, max_displacement: float = 5.0) -> MotionStats:
    """Aggregate a flow field into normalized [0, 1] motion descriptors.

    Per-axis means of the absolute velocities are scaled by
    ``max_displacement`` and clipped at 1; the global level is their mean.
    The signed means give a pan position in [-1, 1]^2, mapped to 4-corner
    channel weights by bilinear interpolation (always a partition of unity).
    """
    if flow.u.size == 0:
        raise ValueError("empty flow field")
    if max_displacement <= 0:
        raise ValueError("max_displacement must be positive")
    mean_h = min(1.0, float(np.abs(flow.u).mean()) / max_displacement)
    mean_v = min(1.0, float(np.abs(flow.v).mean()) / max_displacement)
    pan_x = float(np.clip(flow.u.mean() / max_displacement, -1.0, 1.0))
    pan_y = float(np.clip(flow.v.mean() / max_displacement, -1.0, 1.0))
    x = (pan_x + 1.0) / 2.0
    y = (pan_y + 1.0) / 2.0
    weights = ((1 - x) * (1 - y), x * (1 - y), (1 - x) * y, x * y)
    return MotionStats(
        mean_h=mean_h,
        mean_v=mean_v,
        global_motion=(mean_h + mean_v) / 2.0,
        pan=(pan_x, pan_y),
        channel_weights=weights,
    )
