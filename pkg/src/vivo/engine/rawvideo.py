"""Raw packed-frame ingestion from pipes and files.

The engine deliberately does no video decoding: an external decoder (ffmpeg
in the README) writes packed rgb24/rgba rasters to stdin or a file, and this
module slices them into frames with timestamps derived from the nominal fps.
"""

from __future__ import annotations

from typing import BinaryIO, Iterator

from ..frames import Frame

_BYTES_PER_PIXEL = {"rgb24": 3, "rgba": 4}


def frame_size_bytes(width: int, height: int, pixel_format: str) -> int:
    try:
        return width * height * _BYTES_PER_PIXEL[pixel_format]
    except KeyError:
        raise ValueError(f"unsupported pixel format '{pixel_format}'") from None


def _read_exact(stream: BinaryIO, n: int) -> bytes:
    """Read exactly n bytes; pipes may return short reads mid-frame."""
    chunks = []
    remaining = n
    while remaining > 0:
        chunk = stream.read(remaining)
        if not chunk:
            break
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def read_frames(stream: BinaryIO, width: int, height: int,
                pixel_format: str = "rgb24", fps: float = 30.0) -> Iterator[Frame]:
    """Yield frames from a packed raster stream until EOF.

    A trailing partial frame is discarded. Timestamps are frame_index/fps.
    """
    size = frame_size_bytes(width, height, pixel_format)
    index = 0
    while True:
        data = _read_exact(stream, size)
        if len(data) < size:
            return
        timestamp_ms = index * 1000.0 / fps
        if pixel_format == "rgb24":
            yield Frame.from_rgb24(data, width, height, timestamp_ms)
        else:
            yield Frame.from_rgba(data, width, height, timestamp_ms)
        index += 1


def read_frames_file(path, width: int, height: int,
                     pixel_format: str = "rgb24", fps: float = 30.0) -> Iterator[Frame]:
    with open(path, "rb") as fh:
        yield from read_frames(fh, width, height, pixel_format, fps)
