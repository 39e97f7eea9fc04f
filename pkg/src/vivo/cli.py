"""Command line: run the engine, analyze files offline, drive a running engine.

``stream`` and ``proxy`` are the long-running services; ``analyze`` is the
offline corpus path; ``mapping``/``preset`` are thin HTTP clients for the
control API of an engine that is already running. Log level comes from the
VIVO_LOG environment variable.
"""

from __future__ import annotations

import json
import logging
import os
import re
import sys

import click

from . import corpus as corpus_mod
from .engine.config import (
    ApiConfig,
    EngineConfig,
    InputConfig,
    OscTarget,
    default_mapping,
    dump_config_template,
    load_config,
    save_mapping,
)
from .engine.pipeline import StreamEngine, tune_allocator
from .engine.rawvideo import read_frames, read_frames_file
from .mapping import MappingState
from .motion import FlowParams
from .osc import Endpoint
from .proxy import MappingProxy
from .warmth import QuantizationParams

log = logging.getLogger("vivo.cli")

_INPUT_RE = re.compile(r"^rawvideo:(\d+)x(\d+)@([\d.]+)$")


def _setup_logging():
    level = os.environ.get("VIVO_LOG", "info").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )


def _parse_input_spec(spec: str) -> tuple[int, int, float]:
    m = _INPUT_RE.match(spec)
    if not m:
        raise click.BadParameter(
            f"expected rawvideo:WxH@fps, got '{spec}'", param_hint="--input")
    return int(m.group(1)), int(m.group(2)), float(m.group(3))


def _parse_hostport(value: str, default_host: str = "127.0.0.1") -> tuple[str, int]:
    host, sep, port = value.rpartition(":")
    if not sep:
        host, port = default_host, value
    try:
        return host or default_host, int(port)
    except ValueError:
        raise click.BadParameter(f"expected host:port, got '{value}'")


def _parse_size(value: str) -> tuple[int, int]:
    m = re.match(r"^(\d+)x(\d+)$", value)
    if not m:
        raise click.BadParameter(f"expected WxH, got '{value}'")
    return int(m.group(1)), int(m.group(2))


@click.group()
def main():
    """Real-time video descriptors to OSC."""
    _setup_logging()


@main.command()
@click.option("--input", "input_spec", default="rawvideo:320x240@30",
              show_default=True, help="Input stream spec, rawvideo:WxH@fps.")
@click.option("--pix", "pixel_format", type=click.Choice(["rgb24", "rgba"]),
              default="rgb24", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="Engine config JSON.")
@click.option("--osc", "--send", "osc_targets", multiple=True,
              help="OSC target host:port (repeatable).")
@click.option("--api", "api_bind", default=None,
              help="Control API bind host:port (e.g. 127.0.0.1:8316).")
def stream(input_spec, pixel_format, config_path, osc_targets, api_bind):
    """Analyze raw frames from stdin and stream descriptors over OSC.

    Feed it with e.g.:

        ffmpeg -i movie.mp4 -f rawvideo -pix_fmt rgb24 - | vivo stream
    """
    tune_allocator()
    width, height, fps = _parse_input_spec(input_spec)
    cfg = load_config(config_path) if config_path else EngineConfig()
    updates = {"input": InputConfig(width=width, height=height, fps=fps,
                                    pixel_format=pixel_format)}
    if osc_targets:
        updates["osc"] = tuple(
            OscTarget(host=h, port=p)
            for h, p in (_parse_hostport(t) for t in osc_targets))
    if api_bind:
        host, port = _parse_hostport(api_bind)
        updates["api"] = ApiConfig(host=host, port=port)
    cfg = cfg.model_copy(update=updates)

    engine = StreamEngine(cfg)
    api_server = None
    if cfg.api is not None:
        from .engine.service import ApiServer, build_app

        api_server = ApiServer(build_app(engine), cfg.api.host, cfg.api.port)
        api_server.start()
        log.info("control API on http://%s:%d", cfg.api.host, cfg.api.port)

    frames = read_frames(sys.stdin.buffer, width, height, pixel_format, fps)
    try:
        summary = engine.run(frames)
    except KeyboardInterrupt:
        engine.stop()
        summary = engine.metrics.summary()
    finally:
        if api_server is not None:
            api_server.stop()
    summary["osc"] = engine.osc_counters()
    click.echo(json.dumps(summary, indent=2))


@main.command()
@click.argument("input_file")
@click.option("-o", "--output", required=True, type=click.Path(),
              help="Output CSV path.")
@click.option("--size", required=True, help="Frame size WxH of the raw input.")
@click.option("--pix", "pixel_format", type=click.Choice(["rgb24", "rgba"]),
              default="rgb24", show_default=True)
@click.option("--fps", default=30.0, show_default=True,
              help="Nominal frame rate for timestamps.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="Engine config JSON for analysis parameters.")
def analyze(input_file, output, size, pixel_format, fps, config_path):
    """Analyze a raw-frame video file (or '-' for stdin) into a CSV table."""
    tune_allocator()
    width, height = _parse_size(size)
    cfg = load_config(config_path) if config_path else EngineConfig()
    a = cfg.analysis
    if input_file == "-":
        frames = read_frames(sys.stdin.buffer, width, height, pixel_format, fps)
    else:
        if not os.path.exists(input_file):
            raise click.ClickException(f"input file not found: {input_file}")
        frames = read_frames_file(input_file, width, height, pixel_format, fps)
    try:
        table = corpus_mod.analyze_video(
            frames,
            quantization=QuantizationParams(a.h_bins, a.s_bins, a.v_bins),
            bands=[b.to_band() for b in a.bands],
            gain=a.detail_gain,
            flow=FlowParams(a.flow_alpha, a.flow_iterations),
            max_displacement=a.max_displacement,
        )
    except ValueError as exc:
        raise click.ClickException(
            f"could not analyze '{input_file}': {exc}") from exc
    table.save_csv(output)
    click.echo(f"wrote {len(table)} rows to {output}")


@main.command()
@click.option("--listen", required=True, type=int, help="UDP listen port.")
@click.option("--target", required=True, help="Forward target host:port.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="Engine config JSON holding the mapping.")
def proxy(listen, target, config_path):
    """Receive OSC, apply the mapping, re-emit to the target."""
    host, port = _parse_hostport(target)
    if config_path:
        mapping = load_config(config_path).resolve_mapping()
    else:
        mapping = default_mapping()
    service = MappingProxy(
        Endpoint("0.0.0.0", listen, "receive"),
        mapping,
        Endpoint(host, port, "send"),
    )
    log.info("proxy listening on %d, forwarding to %s:%d", listen, host, port)
    try:
        import threading

        threading.Event().wait()
    except KeyboardInterrupt:
        pass
    finally:
        service.close()
        click.echo(json.dumps({
            "mapped": service.mapped,
            "forwarded": service.forwarded,
            "malformed": service.malformed,
        }))


@main.command("config")
@click.argument("action", type=click.Choice(["init"]))
@click.option("-o", "--output", type=click.Path(), default=None)
def config_cmd(action, output):
    """Write a complete example engine config ('config init')."""
    text = dump_config_template()
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        click.echo(f"wrote {output}")
    else:
        click.echo(text)


def _api_url(api: str) -> str:
    return api.rstrip("/")


@main.group()
def mapping():
    """Read or replace the mapping of a running engine."""


@mapping.command("get")
@click.option("--api", default="http://127.0.0.1:8316", show_default=True)
def mapping_get(api):
    import httpx

    r = httpx.get(f"{_api_url(api)}/api/mapping", timeout=5.0)
    r.raise_for_status()
    click.echo(json.dumps(r.json(), indent=2))


@mapping.command("set")
@click.argument("mapping_file", type=click.Path(exists=True))
@click.option("--api", default="http://127.0.0.1:8316", show_default=True)
def mapping_set(mapping_file, api):
    import httpx

    with open(mapping_file, encoding="utf-8") as fh:
        state = MappingState.model_validate_json(fh.read())
    r = httpx.put(f"{_api_url(api)}/api/mapping",
                  content=state.model_dump_json(),
                  headers={"content-type": "application/json"}, timeout=5.0)
    r.raise_for_status()
    click.echo("mapping updated")


@mapping.command("save")
@click.argument("output", type=click.Path())
def mapping_save(output):
    """Write the shipped default mapping to a file for editing."""
    save_mapping(default_mapping(), output)
    click.echo(f"wrote {output}")


@main.group()
def preset():
    """Manage presets of a running engine."""


@preset.command("list")
@click.option("--api", default="http://127.0.0.1:8316", show_default=True)
def preset_list(api):
    import httpx

    r = httpx.get(f"{_api_url(api)}/api/presets", timeout=5.0)
    r.raise_for_status()
    for p in r.json():
        click.echo(p["id"])


@preset.command("save")
@click.argument("preset_id")
@click.option("--api", default="http://127.0.0.1:8316", show_default=True)
def preset_save(preset_id, api):
    import httpx

    r = httpx.post(f"{_api_url(api)}/api/presets", json={"id": preset_id},
                   timeout=5.0)
    r.raise_for_status()
    click.echo(f"saved '{preset_id}'")


@preset.command("recall")
@click.argument("preset_id")
@click.option("--ramp-ms", default=0.0, show_default=True)
@click.option("--api", default="http://127.0.0.1:8316", show_default=True)
def preset_recall(preset_id, ramp_ms, api):
    import httpx

    r = httpx.post(f"{_api_url(api)}/api/presets/{preset_id}/recall",
                   params={"ramp_ms": ramp_ms}, timeout=5.0)
    if r.status_code == 404:
        raise click.ClickException(f"unknown preset '{preset_id}'")
    r.raise_for_status()
    click.echo(f"recalling '{preset_id}' over {ramp_ms} ms")


if __name__ == "__main__":
    main()
