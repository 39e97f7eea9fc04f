"""Engine configuration: analysis parameters, endpoints, mapping file.

The config and the mapping state share one JSON schema family (pydantic
models), so the file on disk, the control API payloads and the in-memory
state are the same shape. ``vivo`` ships a default mapping with the four
stock routes; every range in it is plain data, nothing is hard-coded in
the pipeline.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..detail import Band
from ..mapping import (
    InputParam,
    MappingState,
    OutputParam,
    RoutingMatrix,
    ScalerParams,
)

#: Descriptor names the pipeline can feed into mapping inputs.
DESCRIPTOR_NAMES = ("warmth", "sharpness", "detail", "luminance", "motion")


class BandConfig(BaseModel):
    model_config = ConfigDict(frozen=True)
    offset: float = Field(ge=0.0, le=1.0)
    width: float = Field(gt=0.0, le=1.0)

    def to_band(self) -> Band:
        return Band(self.offset, self.width)


class AnalysisConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    warmth: bool = True
    sharpness: bool = True
    detail: bool = True
    luminance: bool = True
    motion: bool = True

    h_bins: int = Field(default=18, ge=1)
    s_bins: int = Field(default=4, ge=1)
    v_bins: int = Field(default=4, ge=1)

    flow_alpha: float = Field(default=1.0, gt=0.0)
    flow_iterations: int = Field(default=10, ge=1)
    max_displacement: float = Field(default=5.0, gt=0.0)

    bands: tuple[BandConfig, ...] = (
        BandConfig(offset=0.0, width=0.25),
        BandConfig(offset=0.25, width=0.25),
        BandConfig(offset=0.5, width=0.25),
        BandConfig(offset=0.75, width=0.25),
    )
    detail_gain: float = Field(default=20.0, gt=0.0)


class InputConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    width: int = Field(gt=0)
    height: int = Field(gt=0)
    fps: float = Field(default=30.0, gt=0.0)
    pixel_format: str = "rgb24"

    @model_validator(mode="after")
    def _known_format(self):
        if self.pixel_format not in ("rgb24", "rgba"):
            raise ValueError("pixel_format must be rgb24 or rgba")
        return self


class OscTarget(BaseModel):
    model_config = ConfigDict(frozen=True)
    host: str = "127.0.0.1"
    port: int = Field(ge=1, le=65535)


class ApiConfig(BaseModel):
    model_config = ConfigDict(frozen=True)
    host: str = "127.0.0.1"
    port: int = Field(default=8316, ge=1, le=65535)


class EngineConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    input: InputConfig = InputConfig(width=320, height=240)
    analysis: AnalysisConfig = AnalysisConfig()
    mapping_file: str | None = None
    mapping: MappingState | None = None
    osc: tuple[OscTarget, ...] = ()
    api: ApiConfig | None = None
    monitor_rate_hz: float = Field(default=30.0, gt=0.0)
    osc_queue_size: int = Field(default=256, ge=1)

    def resolve_mapping(self, base_dir: Path | None = None) -> MappingState:
        """Inline mapping wins; then the mapping file; then the default."""
        if self.mapping is not None:
            state = self.mapping
        elif self.mapping_file is not None:
            path = Path(self.mapping_file)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            if not path.exists():
                raise FileNotFoundError(f"mapping file not found: {path}")
            state = load_mapping(path)
        else:
            state = default_mapping()
        _check_input_names(state)
        return state


def _check_input_names(state: MappingState):
    for inp in state.inputs:
        if inp.name not in DESCRIPTOR_NAMES:
            raise ValueError(
                f"unknown descriptor input '{inp.name}', "
                f"expected one of {DESCRIPTOR_NAMES}"
            )


def default_mapping() -> MappingState:
    """The four stock routes.

    warmth -> grain attack/release time (warmer is longer, cubic curve),
    detail -> resampling randomization interval, sharpness -> grain trigger
    period (sharper is faster, hence the inverted output range), luminance
    -> filter resonance. Motion ships unrouted; its values still stream on
    /vivo/motion for spatialization rigs.
    """
    inputs = (
        InputParam(name="warmth", address="/vivo/warmness"),
        InputParam(name="sharpness", address="/vivo/sharpness"),
        InputParam(name="detail", address="/vivo/detail"),
        InputParam(name="luminance", address="/vivo/luminance"),
        InputParam(name="motion", address="/vivo/motion"),
    )
    outputs = (
        OutputParam(name="grain_attack", address="/synth/attack",
                    scaler=ScalerParams(in_min=-1.0, in_max=1.0,
                                        out_min=5.0, out_max=200.0,
                                        exponent=3.0)),
        OutputParam(name="trigger_period", address="/synth/triggerperiod",
                    scaler=ScalerParams(in_min=0.0, in_max=1.0,
                                        out_min=500.0, out_max=20.0)),
        OutputParam(name="resampling_random", address="/synth/resamplingvar",
                    scaler=ScalerParams(in_min=0.0, in_max=1.0,
                                        out_min=0.0, out_max=1200.0)),
        OutputParam(name="filter_q", address="/synth/filterq",
                    scaler=ScalerParams(in_min=0.0, in_max=1.0,
                                        out_min=1.0, out_max=20.0)),
    )
    matrix = RoutingMatrix(gains=(
        (1.0, 0.0, 0.0, 0.0),   # warmth -> attack
        (0.0, 1.0, 0.0, 0.0),   # sharpness -> trigger period
        (0.0, 0.0, 1.0, 0.0),   # detail -> resampling randomization
        (0.0, 0.0, 0.0, 1.0),   # luminance -> filter Q
        (0.0, 0.0, 0.0, 0.0),   # motion unrouted by default
    ))
    return MappingState(inputs=inputs, outputs=outputs, matrix=matrix)


def load_mapping(path) -> MappingState:
    with open(path, encoding="utf-8") as fh:
        return MappingState.model_validate_json(fh.read())


def save_mapping(state: MappingState, path):
    Path(path).write_text(state.model_dump_json(indent=2), encoding="utf-8")


def load_config(path) -> EngineConfig:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    cfg = EngineConfig.model_validate_json(path.read_text(encoding="utf-8"))
    # Fail at load time, not mid-performance.
    cfg.resolve_mapping(base_dir=path.parent)
    return cfg


def packaged_default_mapping_json() -> str:
    """The shipped default mapping file contents."""
    return (resources.files("vivo") / "data" / "default_mapping.json").read_text()


def dump_config_template() -> str:
    """A complete example config, used by ``vivo config init``."""
    cfg = EngineConfig(
        input=InputConfig(width=320, height=240, fps=30.0),
        osc=(OscTarget(host="127.0.0.1", port=9001),),
        api=ApiConfig(host="127.0.0.1", port=8316),
        mapping=default_mapping(),
    )
    return json.dumps(json.loads(cfg.model_dump_json()), indent=2)
