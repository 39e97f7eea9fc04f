import numpy as np
import pytest

from vivo.frames import Frame


def uniform_frame(rgb, width=8, height=8, timestamp_ms=0.0) -> Frame:
    px = np.empty((height, width, 3))
    px[:, :] = rgb
    return Frame(width, height, px, timestamp_ms)


def frame_from_gray(gray: np.ndarray, timestamp_ms=0.0) -> Frame:
    px = np.repeat(gray[:, :, None], 3, axis=2)
    return Frame(gray.shape[1], gray.shape[0], px, timestamp_ms)


def random_frame(rng, width=16, height=16, timestamp_ms=0.0) -> Frame:
    return Frame(width, height, rng.random((height, width, 3)), timestamp_ms)


def gaussian_blob_frame(cx: float, cy: float, sigma=6.0, width=64, height=64,
                        amplitude=0.8, timestamp_ms=0.0) -> Frame:
    y, x = np.mgrid[0:height, 0:width]
    gray = amplitude * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * sigma ** 2))
    return frame_from_gray(gray, timestamp_ms)


def box_blur(frame: Frame) -> Frame:
    """3x3 box blur with replicated borders, per channel."""
    p = np.pad(frame.pixels, ((1, 1), (1, 1), (0, 0)), mode="edge")
    out = np.zeros_like(frame.pixels)
    for dy in range(3):
        for dx in range(3):
            out += p[dy:dy + frame.height, dx:dx + frame.width]
    return Frame(frame.width, frame.height, out / 9.0, frame.timestamp_ms)


def _smoothed_noise(seed: int, h: int, w: int, radius: int) -> np.ndarray:
    noise = np.random.default_rng(seed).random((h, w))
    if radius == 0:
        return noise
    k = 2 * radius + 1
    p = np.pad(noise, radius, mode="edge")
    return sum(p[dy:dy + h, dx:dx + w]
               for dy in range(k) for dx in range(k)) / (k * k)


@pytest.fixture(scope="session")
def synthetic_corpus() -> list[Frame]:
    """20 deterministic textured frames.

    Every frame carries broadband texture (a noise floor) on top of a
    structured pattern, with local contrast kept low enough that Sobel
    magnitudes never clip. The blur-monotonicity properties are asserted
    against exactly this set: real texture shrinks under a box blur by a
    wide margin, whereas degenerate pure patterns (an exact sinusoid, a
    lone smooth blob) have so little high-band energy that replicate-border
    blur artifacts would dominate.
    """
    frames = []
    w = h = 32
    y, x = np.mgrid[0:h, 0:w]

    for i, radius in enumerate((0, 1, 2, 3, 4)):
        frames.append(frame_from_gray(0.2 + 0.1 * _smoothed_noise(i, h, w, radius)))

    for i, sigma in enumerate((2.0, 4.0, 6.0, 9.0)):
        blob = np.exp(-((x - 10 - 3 * i) ** 2 + (y - 14) ** 2) / (2 * sigma ** 2))
        noise = _smoothed_noise(10 + i, h, w, 0)
        frames.append(frame_from_gray(0.1 + 0.06 * blob + 0.05 * noise))

    for i, freq in enumerate((1, 2, 3, 5, 7)):
        grating = np.sin(2 * np.pi * freq * x / w)
        noise = _smoothed_noise(20 + i, h, w, 0)
        frames.append(frame_from_gray(0.3 + 0.05 * grating + 0.05 * noise))

    for i, (gx, gy) in enumerate(((0.08, 0.0), (0.0, 0.08), (0.05, 0.06))):
        ramp = gx * x / w + gy * y / h
        noise = _smoothed_noise(30 + i, h, w, 0)
        frames.append(frame_from_gray(0.15 + ramp + 0.05 * noise))

    blocks = np.where(((x // 2) + (y // 2)) % 2 == 0, 0.06, 0.0)
    frames.append(frame_from_gray(0.2 + blocks + 0.05 * _smoothed_noise(40, h, w, 0)))

    stripes = np.where((x // 2) % 2 == 0, 0.06, 0.0)
    frames.append(frame_from_gray(0.2 + stripes + 0.05 * _smoothed_noise(41, h, w, 0)))

    r = np.sqrt((x - 15.5) ** 2 + (y - 15.5) ** 2)
    frames.append(frame_from_gray(
        0.3 + 0.05 * np.sin(r * 1.5) + 0.05 * _smoothed_noise(42, h, w, 0)))

    assert len(frames) == 20
    return frames
