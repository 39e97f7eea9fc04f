"""Frequency-domain texture descriptor.

The grayscale frame goes through a 2D DFT normalized by pixel count (DC
equals the mean gray level) and shifted so DC sits at the center cell.
A band is a pair of mirror-symmetric cross strips — columns at a given
horizontal distance from center plus rows at the same vertical distance —
and the detail factor is the DC-normalized mean magnitude per band.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import Frame

_DC_EPS = 1e-12


@dataclass(frozen=True)
class Band:
    """Normalized frequency interval: offset 0 is DC, offset+width 1 is Nyquist."""

    offset: float
    width: float

    def __post_init__(self):
        if not (0.0 <= self.offset <= 1.0):
            raise ValueError("band offset out of [0, 1]")
        if self.width <= 0.0:
            raise ValueError("band width must be positive")
        if self.offset + self.width > 1.0 + 1e-9:
            raise ValueError("band exceeds Nyquist")


DEFAULT_BANDS = (Band(0.0, 0.25), Band(0.25, 0.25),
                 Band(0.5, 0.25), Band(0.75, 0.25))
DEFAULT_GAIN = 20.0


def dft_magnitude(f: Frame) -> np.ndarray:
    """DC-centered 2D DFT magnitude of the grayscale plane.

    Normalized by pixel count, so a constant frame of value c yields DC
    magnitude c and zero elsewhere.
    """
    if f.width < 2 or f.height < 2:
        raise ValueError("frame too small")
    spectrum = np.fft.fft2(f.gray) / (f.width * f.height)
    return np.abs(np.fft.fftshift(spectrum))


def _band_mask(shape: tuple[int, int], b: Band) -> np.ndarray:
    """Boolean mask of the two cross strips; DC cell always excluded."""
    h, w = shape
    cy, cx = h // 2, w // 2
    # Normalized distance from center per axis; half-open interval on the
    # right except that a band reaching 1.0 includes the Nyquist line, so a
    # full band covers every off-DC cell.
    dx = np.abs(np.arange(w) - cx) / max(w // 2, 1)
    dy = np.abs(np.arange(h) - cy) / max(h // 2, 1)
    hi = b.offset + b.width
    if hi >= 1.0 - 1e-9:
        in_x = (dx >= b.offset) & (dx <= 1.0)
        in_y = (dy >= b.offset) & (dy <= 1.0)
    else:
        in_x = (dx >= b.offset) & (dx < hi)
        in_y = (dy >= b.offset) & (dy < hi)
    mask = np.zeros(shape, dtype=bool)
    mask[:, in_x] = True
    mask[in_y, :] = True
    mask[cy, cx] = False
    return mask


def band_mean(spectrum: np.ndarray, b: Band) -> float:
    """Mean magnitude over the band's cells (union of both strips)."""
    mask = _band_mask(spectrum.shape, b)
    if not mask.any():
        raise ValueError("empty band")
    return float(spectrum[mask].mean())


def detail(f: Frame, bands=DEFAULT_BANDS,
           gain: float = DEFAULT_GAIN) -> tuple[float, list[float]]:
    """Overall and per-band detail factors in [0, 1].

    Each band's mean magnitude is normalized by the DC magnitude (exposure
    invariance) and scaled by ``gain``, clipped at 1; the overall factor is
    the arithmetic mean over bands.
    """
    if not bands:
        raise ValueError("need at least one band")
    if gain <= 0:
        raise ValueError("gain must be positive")
    spectrum = dft_magnitude(f)
    dc = max(spectrum[f.height // 2, f.width // 2], _DC_EPS)
    per_band = [min(1.0, gain * band_mean(spectrum, b) / dc) for b in bands]
    return float(np.mean(per_band)), per_band
