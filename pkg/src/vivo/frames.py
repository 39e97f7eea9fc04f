"""Frame container, color conversions and the luminance descriptor.

All analysis modules consume frames through this module: pixels are stored
as normalized floats in [0, 1] (8-bit input is divided by 255 exactly) and
every color conversion lives here so no descriptor re-derives it. Derived
planes (channel extremes, grayscale) are cached per frame because several
descriptors share them within the real-time budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Frame:
    """One decoded video image: interleaved RGB, channels in [0, 1].

    ``pixels`` has shape (height, width, 3), row-major. ``timestamp_ms``
    counts milliseconds since stream start.
    """

    width: int
    height: int
    pixels: np.ndarray = field(repr=False)
    timestamp_ms: float = 0.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("degenerate frame")
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixel buffer shape {px.shape} does not match "
                f"{self.height}x{self.width}x3"
            )
        if px.min() < 0.0 or px.max() > 1.0:
            raise ValueError("channel values must lie in [0, 1]")
        if self.timestamp_ms < 0:
            raise ValueError("negative timestamp")
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_rgb24(cls, data: bytes, width: int, height: int,
                   timestamp_ms: float = 0.0) -> "Frame":
        """Build a frame from packed 8-bit RGB bytes (e.g. an ffmpeg pipe)."""
        expected = width * height * 3
        if len(data) != expected:
            raise ValueError(
                f"rgb24 buffer is {len(data)} bytes, expected {expected}"
            )
        px = np.frombuffer(data, dtype=np.uint8).reshape(height, width, 3)
        return cls(width, height, px.astype(np.float64) / 255.0, timestamp_ms)

    @classmethod
    def from_rgba(cls, data: bytes, width: int, height: int,
                  timestamp_ms: float = 0.0) -> "Frame":
        """Build a frame from packed 8-bit RGBA bytes; alpha is discarded."""
        expected = width * height * 4
        if len(data) != expected:
            raise ValueError(
                f"rgba buffer is {len(data)} bytes, expected {expected}"
            )
        px = np.frombuffer(data, dtype=np.uint8).reshape(height, width, 4)
        return cls(width, height,
                   px[:, :, :3].astype(np.float64) / 255.0, timestamp_ms)

    @cached_property
    def planes(self) -> np.ndarray:
        """Contiguous (3, height, width) channel planes.

        The interleaved layout is right for ingestion but wrong for
        vectorized per-channel math; descriptors share this copy.
        """
        return np.ascontiguousarray(np.moveaxis(self.pixels, 2, 0))

    @cached_property
    def channel_max(self) -> np.ndarray:
        r, g, b = self.planes
        return np.maximum(np.maximum(r, g), b)

    @cached_property
    def channel_min(self) -> np.ndarray:
        r, g, b = self.planes
        return np.minimum(np.minimum(r, g), b)

    @cached_property
    def gray(self) -> np.ndarray:
        """Grayscale plane as the mean of R, G, B."""
        r, g, b = self.planes
        return (r + g + b) / 3.0

    @cached_property
    def planes32(self) -> np.ndarray:
        """Single-precision view of :attr:`planes` for bandwidth-bound stages."""
        return self.planes.astype(np.float32)

    @cached_property
    def gray32(self) -> np.ndarray:
        return self.gray.astype(np.float32)


@dataclass(frozen=True)
class HsvPixel:
    """Hue in degrees [0, 360), saturation and value in [0, 1]."""

    h: float
    s: float
    v: float

    def __post_init__(self):
        if not (0.0 <= self.h < 360.0):
            raise ValueError("hue out of [0, 360)")
        if not (0.0 <= self.s <= 1.0 and 0.0 <= self.v <= 1.0):
            raise ValueError("saturation/value out of [0, 1]")


def rgb_to_hsv(p) -> HsvPixel:
    """Convert one RGB triple in [0,1]^3 to HSV (standard hexcone model).

    Achromatic pixels (s == 0) get the canonical hue 0.
    """
    r, g, b = (float(c) for c in p)
    v = max(r, g, b)
    c = v - min(r, g, b)
    if c == 0.0:
        return HsvPixel(0.0, 0.0, v)
    if v == r:
        h = ((g - b) / c) % 6.0
    elif v == g:
        h = (b - r) / c + 2.0
    else:
        h = (r - g) / c + 4.0
    return HsvPixel((h * 60.0) % 360.0, c / v, v)


def hsv_to_rgb(p: HsvPixel) -> tuple[float, float, float]:
    """Inverse hexcone conversion, used for round-trip checks."""
    c = p.v * p.s
    hp = p.h / 60.0
    x = c * (1.0 - abs(hp % 2.0 - 1.0))
    sector = int(hp) % 6
    r, g, b = [(c, x, 0.0), (x, c, 0.0), (0.0, c, x),
               (0.0, x, c), (x, 0.0, c), (c, 0.0, x)][sector]
    m = p.v - c
    return (r + m, g + m, b + m)


def hsv_planes(f: Frame) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized RGB->HSV over a whole frame.

    Returns (h, s, v) planes with h in degrees [0, 360); achromatic pixels
    carry hue 0, matching :func:`rgb_to_hsv`.
    """
    r, g, b = f.planes
    v = f.channel_max
    c = v - f.channel_min
    inv_c = 1.0 / np.where(c > 0.0, c, 1.0)
    # Only the v==r sector can go negative; wrap it by adding one turn
    # instead of a modulo. Achromatic pixels land in that sector with
    # g-b == 0, i.e. hue 0.
    hr = (g - b) * inv_c
    hr = np.where(hr < 0.0, hr + 6.0, hr)
    h = np.where(v == r, hr,
                 np.where(v == g, 2.0 + (b - r) * inv_c,
                          4.0 + (r - g) * inv_c))
    # hr == -eps + 6 can round to exactly 6.0; that is hue 0 again.
    h = np.where(h >= 6.0, 0.0, h) * 60.0
    s = c / np.where(v > 0.0, v, 1.0)
    return h, s, v


def mean_luminance(f: Frame) -> float:
    """Mean HSL lightness over the frame: per pixel (max+min)/2, in [0, 1]."""
    return float((f.channel_max + f.channel_min).mean() / 2.0)
