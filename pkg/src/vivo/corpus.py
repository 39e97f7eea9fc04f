"""Offline corpus analysis and nearest-neighbor unit selection.

A whole video becomes a descriptor table (one row per frame); units are
selected by Euclidean distance over min-max-normalized descriptor columns,
and two tables can be paired cursor-style: query both corpora from the
cursor (pre-selection) or select in A first and use its descriptors to
query B (post-selection). Selection is a brute-force linear scan on
purpose: corpora of minutes of video stay small, and the scan is its own
reference implementation.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import detail as detail_mod
from . import motion as motion_mod
from .frames import Frame, mean_luminance
from .sharpness import sharpness
from .warmth import QuantizationParams, warmth

#: Column order of analyzed tables.
COLUMNS = ("warmth", "sharpness", "detail", "luminance", "motion_global")


class PairingMode(enum.Enum):
    PRE_SELECTION = "pre_selection"
    POST_SELECTION = "post_selection"


@dataclass(frozen=True)
class TableRow:
    unit_index: int
    time_ms: float
    values: tuple[float, ...]


class DescriptorTable:
    """Immutable per-frame descriptor rows plus per-column min/max."""

    def __init__(self, columns, rows: Iterable[TableRow]):
        self.columns = tuple(columns)
        self.rows = tuple(rows)
        if any(len(r.values) != len(self.columns) for r in self.rows):
            raise ValueError("row arity does not match columns")
        self._matrix = np.array([r.values for r in self.rows], dtype=np.float64)
        self._indices = np.array([r.unit_index for r in self.rows], dtype=np.int64)
        if self.rows:
            self.col_min = self._matrix.min(axis=0)
            self.col_max = self._matrix.max(axis=0)
        else:
            self.col_min = np.zeros(len(self.columns))
            self.col_max = np.zeros(len(self.columns))

    def __len__(self) -> int:
        return len(self.rows)

    def row_by_index(self, unit_index: int) -> TableRow:
        for r in self.rows:
            if r.unit_index == unit_index:
                return r
        raise KeyError(unit_index)

    def values_of(self, unit_index: int, dims) -> dict[str, float]:
        row = self.row_by_index(unit_index)
        return {d: row.values[self.columns.index(d)] for d in dims}

    def _normalized(self, dims):
        """Min-max normalized columns for the selected dims.

        Zero-range columns normalize to 0 everywhere so they contribute no
        distance, which makes selection invariant under per-column affine
        rescaling of the raw values.
        """
        cols = [self.columns.index(d) for d in dims]
        sub = self._matrix[:, cols]
        lo = self.col_min[cols]
        span = self.col_max[cols] - lo
        safe = np.where(span > 0, span, 1.0)
        normalized = (sub - lo) / safe
        normalized[:, span == 0] = 0.0
        return normalized, lo, span

    def nearest(self, query: dict[str, float]) -> int:
        """Unit index minimizing normalized Euclidean distance to the query.

        Ties break toward the lowest unit index.
        """
        if not self.rows:
            raise ValueError("empty corpus")
        for d in query:
            if d not in self.columns:
                raise ValueError("unknown descriptor")
        dims = [d for d in self.columns if d in query]
        normalized, lo, span = self._normalized(dims)
        q = np.array([query[d] for d in dims], dtype=np.float64)
        safe = np.where(span > 0, span, 1.0)
        qn = (q - lo) / safe
        qn[span == 0] = 0.0
        dist = ((normalized - qn) ** 2).sum(axis=1)
        best = np.flatnonzero(dist == dist.min())
        return int(self._indices[best].min())

    def to_csv(self) -> str:
        """Serialize with full float precision (repr round-trips exactly)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["unit_index", "time_ms", *self.columns])
        for r in self.rows:
            writer.writerow([int(r.unit_index), repr(float(r.time_ms)),
                             *(repr(float(v)) for v in r.values)])
        return buf.getvalue()

    def save_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())

    @classmethod
    def from_csv(cls, text: str) -> "DescriptorTable":
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("empty corpus") from None
        if header[:2] != ["unit_index", "time_ms"]:
            raise ValueError("missing unit_index/time_ms header")
        columns = header[2:]
        rows = []
        for rec in reader:
            if not rec:
                continue
            rows.append(TableRow(int(rec[0]), float(rec[1]),
                                 tuple(float(v) for v in rec[2:])))
        return cls(columns, rows)

    @classmethod
    def load_csv(cls, path) -> "DescriptorTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_csv(fh.read())


def analyze_video(frames: Iterable[Frame],
                  quantization: QuantizationParams = QuantizationParams(),
                  bands=detail_mod.DEFAULT_BANDS,
                  gain: float = detail_mod.DEFAULT_GAIN,
                  flow: motion_mod.FlowParams = motion_mod.FlowParams(),
                  max_displacement: float = 5.0) -> DescriptorTable:
    """Analyze every frame as a still image plus frame-to-frame motion.

    Columns: warmth, sharpness, detail, luminance, motion_global (zero for
    the first frame, which has no predecessor).
    """
    rows = []
    prev: Frame | None = None
    for i, frame in enumerate(frames):
        if prev is not None and (prev.width, prev.height) != (frame.width, frame.height):
            raise ValueError("frame size mismatch")
        overall, _ = detail_mod.detail(frame, bands, gain)
        if prev is None:
            motion_global = 0.0
        else:
            field = motion_mod.horn_schunck(prev, frame, flow)
            motion_global = motion_mod.motion_stats(field, max_displacement).global_motion
        rows.append(TableRow(
            unit_index=i,
            time_ms=frame.timestamp_ms,
            values=(warmth(frame, quantization), sharpness(frame), overall,
                    mean_luminance(frame), motion_global),
        ))
        prev = frame
    if not rows:
        raise ValueError("empty corpus")
    return DescriptorTable(COLUMNS, rows)


def nearest(table: DescriptorTable, query: dict[str, float]) -> int:
    return table.nearest(query)


def pair(a: DescriptorTable, b: DescriptorTable, cursor: dict[str, float],
         mode: PairingMode) -> tuple[int, int]:
    """Select one unit from each corpus for a cursor position.

    Pre-selection queries both tables independently from the cursor;
    post-selection picks in A first, then queries B with A's selected
    descriptor values restricted to the columns the tables share.
    """
    if mode is PairingMode.PRE_SELECTION:
        return a.nearest(cursor), b.nearest(cursor)
    unit_a = a.nearest(cursor)
    shared = [c for c in a.columns if c in b.columns]
    if not shared:
        raise ValueError("no shared descriptors")
    return unit_a, b.nearest(a.values_of(unit_a, shared))
