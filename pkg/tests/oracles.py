"""Independent reference implementations the library is checked against.

Everything here is written the slow, obvious way (per-pixel loops, direct
double sums, stdlib colorsys) and never calls into the code paths under
test.
"""

from __future__ import annotations

import cmath
import colorsys

import numpy as np


def oracle_temperature(h_deg: float) -> int:
    if 75.0 < h_deg < 285.0:
        return -1
    return 1


def per_pixel_warmth(pixels: np.ndarray) -> float:
    """Mean over pixels of T(hue) * saturation * value, via colorsys."""
    total = 0.0
    h, w, _ = pixels.shape
    for y in range(h):
        for x in range(w):
            r, g, b = pixels[y, x]
            hue, sat, val = colorsys.rgb_to_hsv(r, g, b)
            total += oracle_temperature(hue * 360.0) * sat * val
    return total / (h * w)


def per_pixel_bin_counts(pixels: np.ndarray, h_bins: int, s_bins: int,
                         v_bins: int) -> dict[tuple[int, int, int], int]:
    counts: dict[tuple[int, int, int], int] = {}
    h, w, _ = pixels.shape
    for y in range(h):
        for x in range(w):
            r, g, b = pixels[y, x]
            hue, sat, val = colorsys.rgb_to_hsv(r, g, b)
            hi = min(int(hue * 360.0 / 360.0 * h_bins), h_bins - 1)
            si = min(int(sat * s_bins), s_bins - 1)
            vi = min(int(val * v_bins), v_bins - 1)
            key = (hi, si, vi)
            counts[key] = counts.get(key, 0) + 1
    return counts


_SOBEL_X = ((-1, 0, 1), (-2, 0, 2), (-1, 0, 1))
_SOBEL_Y = ((-1, -2, -1), (0, 0, 0), (1, 2, 1))


def naive_sobel_magnitude(pixels: np.ndarray) -> np.ndarray:
    """Direct double-loop 3x3 convolution with replicated borders."""
    h, w, nc = pixels.shape
    out = np.zeros_like(pixels)
    for c in range(nc):
        for y in range(h):
            for x in range(w):
                gx = 0.0
                gy = 0.0
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        yy = min(max(y + dy, 0), h - 1)
                        xx = min(max(x + dx, 0), w - 1)
                        val = pixels[yy, xx, c]
                        gx += _SOBEL_X[dy + 1][dx + 1] * val
                        gy += _SOBEL_Y[dy + 1][dx + 1] * val
                out[y, x, c] = min(1.0, (gx * gx + gy * gy) ** 0.5)
    return out


def naive_centered_dft_magnitude(gray: np.ndarray) -> np.ndarray:
    """Direct double-sum DFT, normalized by pixel count, DC at (h//2, w//2)."""
    h, w = gray.shape
    cy, cx = h // 2, w // 2
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            ky, kx = i - cy, j - cx
            acc = 0j
            for y in range(h):
                for x in range(w):
                    acc += gray[y, x] * cmath.exp(
                        -2j * cmath.pi * (ky * y / h + kx * x / w))
            out[i, j] = abs(acc) / (h * w)
    return out


def brute_force_nearest(rows: list[tuple[int, tuple[float, ...]]],
                        col_names: tuple[str, ...],
                        query: dict[str, float]) -> int:
    """Linear scan over (unit_index, values) with min-max normalization."""
    dims = [c for c in col_names if c in query]
    cols = [col_names.index(d) for d in dims]
    lo = [min(vals[c] for _, vals in rows) for c in cols]
    hi = [max(vals[c] for _, vals in rows) for c in cols]

    def norm(value, k):
        span = hi[k] - lo[k]
        return 0.0 if span == 0 else (value - lo[k]) / span

    best_idx = None
    best_dist = None
    for unit, vals in rows:
        dist = sum((norm(vals[c], k) - norm(query[dims[k]], k)) ** 2
                   for k, c in enumerate(cols))
        if best_dist is None or dist < best_dist or (
                dist == best_dist and unit < best_idx):
            best_idx, best_dist = unit, dist
    return best_idx
