"""Live control surface: scalers, routing matrix and interpolating presets.

These models double as the persisted config schema and the control API
request/response bodies, so an edit round-trips byte-identically between
file, wire and engine. The engine treats a MappingState as an immutable
snapshot and swaps whole states atomically; nothing here mutates in place.
"""

from __future__ import annotations

import math
import time

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ScalerParams(BaseModel):
    """Exponential range mapping. Not clamped: inputs outside in_min..in_max
    overshoot the output range by design."""

    model_config = ConfigDict(frozen=True)

    in_min: float = 0.0
    in_max: float = 1.0
    out_min: float = 0.0
    out_max: float = 1.0
    exponent: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _distinct_input_range(self):
        if self.in_min == self.in_max:
            raise ValueError("in_min and in_max must differ")
        return self


def scale(x: float, p: ScalerParams) -> float:
    """Map x through the scaler curve.

    The normalized position t = (x - in_min)/(in_max - in_min) is raised to
    the exponent (sign preserved for t < 0, keeping the curve total and
    monotone), then projected onto the output range. Endpoints are exact:
    scale(in_min) == out_min and scale(in_max) == out_max for any exponent.
    """
    t = (x - p.in_min) / (p.in_max - p.in_min)
    if t == 0.0:
        return p.out_min
    if t == 1.0:
        return p.out_max
    curved = math.copysign(abs(t) ** p.exponent, t)
    return p.out_min + (p.out_max - p.out_min) * curved


class RoutingMatrix(BaseModel):
    """Dense gain matrix, rows = descriptor inputs, columns = output params."""

    model_config = ConfigDict(frozen=True)

    gains: tuple[tuple[float, ...], ...]

    @field_validator("gains")
    @classmethod
    def _rectangular_unit_gains(cls, gains):
        if gains and any(len(row) != len(gains[0]) for row in gains):
            raise ValueError("gain rows must have equal length")
        for row in gains:
            for g in row:
                if not (0.0 <= g <= 1.0):
                    raise ValueError("gains must lie in [0, 1]")
        return gains

    @property
    def rows(self) -> int:
        return len(self.gains)

    @property
    def cols(self) -> int:
        return len(self.gains[0]) if self.gains else 0


def route(m: RoutingMatrix, inputs: list[float]) -> list[float]:
    """Weighted-sum routing: output_j = sum_i gains[i][j] * inputs[i]."""
    if len(inputs) != m.rows:
        raise ValueError("dimension mismatch")
    return [
        sum(m.gains[i][j] * inputs[i] for i in range(m.rows))
        for j in range(m.cols)
    ]


class InputParam(BaseModel):
    """One descriptor input: its name and the OSC address it arrives on."""

    model_config = ConfigDict(frozen=True)

    name: str
    address: str

    @field_validator("address")
    @classmethod
    def _osc_address(cls, address):
        if not address.startswith("/"):
            raise ValueError("OSC address must start with '/'")
        return address


class OutputParam(BaseModel):
    """One synthesis parameter: target OSC address plus its scaler."""

    model_config = ConfigDict(frozen=True)

    name: str
    address: str
    scaler: ScalerParams = ScalerParams()

    @field_validator("address")
    @classmethod
    def _osc_address(cls, address):
        if not address.startswith("/"):
            raise ValueError("OSC address must start with '/'")
        return address


class Preset(BaseModel):
    """A recallable snapshot of the matrix and the per-route scalers."""

    model_config = ConfigDict(frozen=True)

    id: str
    matrix: RoutingMatrix
    scalers: tuple[ScalerParams, ...]
    created_at: float = Field(default_factory=lambda: time.time() * 1000.0)


class MappingState(BaseModel):
    """The whole live-editable control surface, including the preset bank."""

    model_config = ConfigDict(frozen=True)

    inputs: tuple[InputParam, ...]
    outputs: tuple[OutputParam, ...]
    matrix: RoutingMatrix
    presets: tuple[Preset, ...] = ()

    @model_validator(mode="after")
    def _consistent_dimensions(self):
        if self.matrix.rows != len(self.inputs):
            raise ValueError("matrix rows must match input count")
        if self.matrix.cols != len(self.outputs):
            raise ValueError("matrix columns must match output count")
        for preset in self.presets:
            _check_preset_dims(self, preset)
        return self

    def apply(self, values: list[float]) -> list[tuple[str, float]]:
        """Route raw descriptor values and scale each output.

        Returns (osc_address, value) pairs in output order.
        """
        routed = route(self.matrix, values)
        return [
            (out.address, scale(x, out.scaler))
            for out, x in zip(self.outputs, routed)
        ]

    def preset_by_id(self, preset_id: str) -> Preset | None:
        for preset in self.presets:
            if preset.id == preset_id:
                return preset
        return None


def _check_preset_dims(state: MappingState, preset: Preset):
    if (preset.matrix.rows != state.matrix.rows
            or preset.matrix.cols != state.matrix.cols
            or len(preset.scalers) != len(state.outputs)):
        raise ValueError("incompatible preset")


def save_preset(state: MappingState, preset_id: str) -> Preset:
    """Capture the current matrix and scalers under the given id."""
    return Preset(
        id=preset_id,
        matrix=state.matrix,
        scalers=tuple(out.scaler for out in state.outputs),
    )


def store_preset(state: MappingState, preset: Preset) -> MappingState:
    """Add or replace a preset in the bank."""
    _check_preset_dims(state, preset)
    kept = tuple(p for p in state.presets if p.id != preset.id)
    return state.model_copy(update={"presets": kept + (preset,)})


def _lerp(a: float, b: float, t: float) -> float:
    return (1.0 - t) * a + t * b


def _lerp_scaler(a: ScalerParams, b: ScalerParams, t: float) -> ScalerParams:
    return ScalerParams(
        in_min=_lerp(a.in_min, b.in_min, t),
        in_max=_lerp(a.in_max, b.in_max, t),
        out_min=_lerp(a.out_min, b.out_min, t),
        out_max=_lerp(a.out_max, b.out_max, t),
        exponent=_lerp(a.exponent, b.exponent, t),
    )


def ramp_progress(elapsed_ms: float, ramp_ms: float) -> float:
    """Recall progress in [0, 1]; a zero ramp jumps straight to the target."""
    if ramp_ms <= 0:
        return 1.0
    return min(1.0, max(0.0, elapsed_ms / ramp_ms))


def recall_preset(current: MappingState, target: Preset, t: float) -> MappingState:
    """Interpolate the live state toward a preset at progress t in [0, 1].

    Every numeric field (matrix gains, scaler params) moves linearly;
    t=0 returns the current state unchanged, t=1 lands exactly on the
    preset. Input/output names, addresses and the preset bank are untouched.
    """
    _check_preset_dims(current, target)
    if t <= 0.0:
        return current
    gains = tuple(
        tuple(_lerp(current.matrix.gains[i][j], target.matrix.gains[i][j], t)
              for j in range(current.matrix.cols))
        for i in range(current.matrix.rows)
    )
    outputs = tuple(
        out.model_copy(update={"scaler": _lerp_scaler(out.scaler, s, t)})
        for out, s in zip(current.outputs, target.scalers)
    )
    return current.model_copy(
        update={"matrix": RoutingMatrix(gains=gains), "outputs": outputs}
    )
