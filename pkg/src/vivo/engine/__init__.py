"""Executable engine: ingestion, per-frame pipeline, OSC emission, control API."""

from .config import EngineConfig, default_mapping, load_config, load_mapping
from .pipeline import (
    DescriptorFrame,
    PipelineMetrics,
    StreamEngine,
    process_frame,
    tune_allocator,
)

__all__ = [
    "EngineConfig",
    "default_mapping",
    "load_config",
    "load_mapping",
    "DescriptorFrame",
    "PipelineMetrics",
    "StreamEngine",
    "process_frame",
    "tune_allocator",
]
