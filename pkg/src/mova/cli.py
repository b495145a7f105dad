"""Command-line interface: compute indicator CSVs, render SVG charts,
fetch remote quotes, and launch the HTTP service.

Exit codes are a stable scripting contract: 0 success, 1 runtime or data
error, 2 usage error. The remote endpoint template can be overridden with
the ``MOVA_ENDPOINT`` environment variable or an optional JSON config file
(keys ``endpoint``, ``ttl``, ``timeout``, ``port``) at the platform's
conventional application-config path.
"""

from __future__ import annotations

import json
import os
import socket
import sys
from pathlib import Path

import click

from .errors import CsvError, MovaError
from .indicators import compute_indicator
from .ingest import dump_csv, load_csv
from .model import (
    DEFAULT_PERIOD,
    IndicatorSpec,
    PlotType,
    TimeSeriesFrame,
    default_indicators,
    parse_spec_list,
    parse_symbol,
)
from .plotting import render_chart
from .remote import DEFAULT_TTL_SECONDS, QuoteCache, RemoteEndpointConfig, fetch
from .service import DEFAULT_PORT, SessionState, create_app

CONFIG_FILENAME = "config.json"

ENDPOINT_ENV_VAR = "MOVA_ENDPOINT"
STATIC_ENV_VAR = "MOVA_STATIC"


def _load_config_file() -> dict:
    path = Path(click.get_app_dir("mova")) / CONFIG_FILENAME
    if not path.is_file():
        return {}
    try:
        config = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"unreadable config file {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise click.ClickException(f"config file {path} must hold a JSON object")
    return config


def _remote_config() -> RemoteEndpointConfig:
    config = _load_config_file()
    template = os.environ.get(ENDPOINT_ENV_VAR) or config.get("endpoint")
    kwargs = {}
    if template:
        kwargs["base_url_template"] = template
    if "timeout" in config:
        kwargs["timeout"] = float(config["timeout"])
    return RemoteEndpointConfig(**kwargs)


def _parse_specs(ctx, param, values) -> tuple[IndicatorSpec, ...]:
    if not values:
        return default_indicators(DEFAULT_PERIOD)
    specs: list[IndicatorSpec] = []
    try:
        for value in values:
            specs.extend(parse_spec_list(value, DEFAULT_PERIOD))
    except MovaError as exc:
        raise click.BadParameter(str(exc), ctx=ctx, param=param) from exc
    labels = [spec.label for spec in specs]
    duplicates = {label for label in labels if labels.count(label) > 1}
    if duplicates:
        raise click.BadParameter(
            f"duplicate indicator labels: {', '.join(sorted(duplicates))}", ctx=ctx, param=param
        )
    return tuple(specs)


def _parse_symbol_arg(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_symbol(value)
    except MovaError as exc:
        raise click.BadParameter(str(exc), ctx=ctx, param=param) from exc


def _load_input_frame(path: Path) -> TimeSeriesFrame:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise click.ClickException(f"cannot read {path}: {exc}") from exc
    try:
        return load_csv(data, source_label=str(path))
    except CsvError as exc:
        raise click.ClickException(f"{path}: {exc}") from exc


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc}") from exc


@click.group()
def main():
    """Moving-average workbench for daily OHLCV data."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(path_type=Path), help="Input CSV file.")
@click.option("--spec", "specs", multiple=True, callback=_parse_specs,
              help="Comma-separated kind[:period[:column]] list, e.g. sma:3,wma:3,ema:3.")
@click.option("--output", "output_path", required=True, type=click.Path(path_type=Path), help="Output CSV file.")
def compute(input_path: Path, specs: tuple[IndicatorSpec, ...], output_path: Path):
    """Compute indicators over a CSV file and write them as CSV columns.

    The output keeps the Date column (ISO form), the source column(s), and
    one column per requested indicator; warm-up cells are left empty.
    """
    frame = _load_input_frame(input_path)
    columns: dict = {}
    try:
        for spec in specs:
            if spec.source_column not in columns:
                columns[spec.source_column] = frame.column(spec.source_column)
        for spec in specs:
            columns[spec.label] = compute_indicator(frame, spec).values
    except MovaError as exc:
        raise click.ClickException(str(exc)) from exc
    table = TimeSeriesFrame(dates=frame.dates, columns=columns, source_label=str(input_path))
    _write_text(output_path, dump_csv(table))


@main.command()
@click.option("--input", "input_path", type=click.Path(path_type=Path), help="Input CSV file.")
@click.option("--symbol", callback=_parse_symbol_arg, help="Remote symbol, e.g. EBAY.US.")
@click.option("--spec", "specs", multiple=True, callback=_parse_specs,
              help="Comma-separated kind[:period[:column]] list.")
@click.option("--type", "plot_type", type=click.Choice([t.value for t in PlotType]),
              default=PlotType.LINE.value, show_default=True, help="Chart style.")
@click.option("--output", "output_path", required=True, type=click.Path(path_type=Path), help="Output SVG file.")
def plot(input_path, symbol, specs, plot_type, output_path: Path):
    """Render a chart with indicator overlays to a self-contained SVG."""
    if (input_path is None) == (symbol is None):
        raise click.UsageError("exactly one of --input or --symbol is required")
    if input_path is not None:
        frame = _load_input_frame(input_path)
        title = None
    else:
        try:
            frame = fetch(symbol, _remote_config())
        except MovaError as exc:
            raise click.ClickException(str(exc)) from exc
        title = symbol.render()
    try:
        series = [compute_indicator(frame, spec) for spec in specs]
    except MovaError as exc:
        raise click.ClickException(str(exc)) from exc
    try:
        render_chart(frame, series, PlotType(plot_type), output_path, title=title)
    except OSError as exc:
        raise click.ClickException(f"cannot write {output_path}: {exc}") from exc


@main.command(name="fetch")
@click.argument("symbol", callback=_parse_symbol_arg)
@click.option("--output", "output_path", required=True, type=click.Path(path_type=Path), help="Output CSV file.")
def fetch_command(symbol, output_path: Path):
    """Download a symbol's daily history and write it as normalized CSV."""
    try:
        frame = fetch(symbol, _remote_config())
    except MovaError as exc:
        raise click.ClickException(str(exc)) from exc
    _write_text(output_path, dump_csv(frame))


def _resolve_static_dir() -> Path | None:
    override = os.environ.get(STATIC_ENV_VAR)
    if override:
        return Path(override)
    bundled = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
    candidates = [Path.cwd() / "frontend" / "dist", bundled]
    for candidate in candidates:
        if candidate.is_dir():
            return candidate
    return None


@main.command()
@click.option("--port", type=int, default=None, help=f"Listen port (default {DEFAULT_PORT}; 0 picks a free port).")
@click.option("--bind", default="127.0.0.1", show_default=True, help="Bind address.")
def serve(port, bind):
    """Run the local HTTP service until interrupted."""
    import uvicorn

    config = _load_config_file()
    if port is None:
        port = int(config.get("port", DEFAULT_PORT))
    ttl = float(config.get("ttl", DEFAULT_TTL_SECONDS))
    state = SessionState(quote_cache=QuoteCache(ttl=ttl))
    app = create_app(state, remote_config=_remote_config(), static_dir=_resolve_static_dir())

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((bind, port))
    except OSError as exc:
        sock.close()
        raise click.ClickException(f"cannot bind {bind}:{port}: {exc}") from exc
    actual_port = sock.getsockname()[1]
    click.echo(f"Serving on http://{bind}:{actual_port}")
    sys.stdout.flush()
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    server.run(sockets=[sock])


if __name__ == "__main__":
    main()
