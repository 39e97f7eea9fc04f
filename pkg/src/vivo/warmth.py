"""Global image warmth factor in [-1, 1].

Pipeline: quantize the frame's HSV values into a uniform-grid color
histogram, assign each occupied bin a binary temperature from its center
hue (warm +1 / cold -1, cold strictly inside (75, 285) degrees), weight it
by saturation x value, and sum the weighted temperatures over the
normalized histogram.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import Frame, HsvPixel, hsv_planes


@dataclass(frozen=True)
class QuantizationParams:
    """Uniform HSV grid resolution. Total colors = h_bins * s_bins * v_bins."""

    h_bins: int = 18
    s_bins: int = 4
    v_bins: int = 4

    def __post_init__(self):
        if min(self.h_bins, self.s_bins, self.v_bins) < 1:
            raise ValueError("bin counts must be >= 1")


@dataclass(frozen=True)
class ColorHistogram:
    """Occupied bins only: (bin center, normalized frequency) pairs."""

    entries: tuple[tuple[HsvPixel, float], ...]


def color_temperature(h: float) -> int:
    """Binary temperature of a hue: -1 strictly inside (75, 285), else +1.

    Both boundaries (75 and 285 degrees) count as warm.
    """
    if not (0.0 <= h < 360.0):
        raise ValueError("hue out of [0, 360)")
    return -1 if 75.0 < h < 285.0 else 1


def weight(s: float, v: float) -> float:
    """Impact of a color on perceived warmth: the product s * v.

    Dark or desaturated colors weigh nothing; bright saturated colors
    approach 1.
    """
    if not (0.0 <= s <= 1.0 and 0.0 <= v <= 1.0):
        raise ValueError("saturation/value out of [0, 1]")
    return s * v


def _flat_indices(h: np.ndarray, s: np.ndarray, v: np.ndarray,
                  q: QuantizationParams) -> np.ndarray:
    """Per-pixel flat bin index on the uniform (h, s, v) grid."""
    hi = np.minimum((h / 360.0 * q.h_bins).astype(np.intp), q.h_bins - 1)
    si = np.minimum((s * q.s_bins).astype(np.intp), q.s_bins - 1)
    vi = np.minimum((v * q.v_bins).astype(np.intp), q.v_bins - 1)
    return (hi * q.s_bins + si) * q.v_bins + vi


def bin_center(q: QuantizationParams, hi: int, si: int, vi: int) -> HsvPixel:
    """Arithmetic center of grid cell (hi, si, vi)."""
    return HsvPixel(
        (hi + 0.5) * 360.0 / q.h_bins,
        (si + 0.5) / q.s_bins,
        (vi + 0.5) / q.v_bins,
    )


def quantize_hsv(f: Frame, q: QuantizationParams) -> ColorHistogram:
    """Uniform-grid HSV histogram with frequencies normalized to sum to 1."""
    h, s, v = hsv_planes(f)
    flat = _flat_indices(h, s, v, q)
    counts = np.bincount(flat.ravel(), minlength=q.h_bins * q.s_bins * q.v_bins)
    total = flat.size
    entries = []
    for idx in np.flatnonzero(counts):
        hi, rem = divmod(int(idx), q.s_bins * q.v_bins)
        si, vi = divmod(rem, q.v_bins)
        entries.append((bin_center(q, hi, si, vi), counts[idx] / total))
    return ColorHistogram(tuple(entries))


def warmth(f: Frame, q: QuantizationParams = QuantizationParams()) -> float:
    """Overall warmth Theta in [-1, 1]: sum of freq * T * weight over bins.

    Each occupied bin contributes its pixel frequency times the binary
    temperature of its center hue times the weight of its representative
    color. The representative saturation/value is the mean over the bin's
    pixels, which keeps the exact anchors: all-black or desaturated frames
    score exactly 0, a uniform fully saturated warm frame exactly +1, and
    bin-center-aligned colors reproduce the per-pixel value. Hue stays
    quantized, so Theta converges to the per-pixel mean of T(h)*s*v as the
    grid grows finer.
    """
    h, s, v = hsv_planes(f)
    n_bins = q.h_bins * q.s_bins * q.v_bins
    flat = _flat_indices(h, s, v, q).ravel()
    counts = np.bincount(flat, minlength=n_bins)
    s_sums = np.bincount(flat, weights=s.ravel(), minlength=n_bins)
    v_sums = np.bincount(flat, weights=v.ravel(), minlength=n_bins)
    total = flat.size
    theta = 0.0
    for idx in np.flatnonzero(counts):
        count = counts[idx]
        hi = int(idx) // (q.s_bins * q.v_bins)
        center_h = (hi + 0.5) * 360.0 / q.h_bins
        theta += (count / total * color_temperature(center_h)
                  * weight(s_sums[idx] / count, v_sums[idx] / count))
    return float(min(1.0, max(-1.0, theta)))


def warmth_per_pixel(f: Frame) -> float:
    """Quantization-free warmth: mean over pixels of T(h) * s * v.

    Reference value the histogram estimate converges to; also handy when
    bin error is unwanted and speed is not critical.
    """
    h, s, v = hsv_planes(f)
    t = np.where((h > 75.0) & (h < 285.0), -1.0, 1.0)
    return float((t * s * v).mean())
