"""Local HTTP service exposing frames and computed indicators as JSON.

All state lives in one in-memory :class:`SessionState`; restarting the
process empties it. Every non-2xx response body carries a machine-readable
``code`` plus a human ``message`` (and file coordinates for CSV errors).
Undefined indicator slots are serialized as ``null`` so arrays stay
index-aligned with the frame's dates.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, File, Form, Query, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import indicators
from .errors import (
    CsvError,
    MalformedPayloadError,
    MalformedSpecError,
    MalformedSymbolError,
    MovaError,
    NetworkFailureError,
    PeriodError,
    UnknownColumnError,
    UnknownSymbolError,
)
from .ingest import load_csv, parse_date
from .model import (
    DEFAULT_PERIOD,
    IndicatorSpec,
    TimeSeriesFrame,
    default_indicators,
    parse_spec_list,
    parse_symbol,
)
from .remote import QuoteCache, RemoteEndpointConfig

MAX_UPLOAD_BYTES = 50 * 1024 * 1024

DEFAULT_PORT = 8777


@dataclass
class SessionState:
    """Mutable service state: named frames, quote cache, default period."""

    frames: dict[str, TimeSeriesFrame] = field(default_factory=dict)
    quote_cache: QuoteCache = field(default_factory=QuoteCache)
    default_period: int = DEFAULT_PERIOD
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)


class ApiError(Exception):
    """Route-level failure carrying an HTTP status and error payload."""

    def __init__(self, status: int, code: str, message: str, **extra):
        super().__init__(message)
        self.status = status
        self.code = code
        self.extra = extra

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": str(self)}
        body.update({k: v for k, v in self.extra.items() if v is not None})
        return JSONResponse(body, status_code=self.status)


_STATUS_BY_TYPE: tuple[tuple[type, int], ...] = (
    (UnknownSymbolError, 404),
    (NetworkFailureError, 502),
    (MalformedPayloadError, 502),
    (UnknownColumnError, 404),
    (MalformedSymbolError, 400),
    (MalformedSpecError, 400),
    (PeriodError, 400),
    (CsvError, 400),
)


def _to_api_error(exc: MovaError) -> ApiError:
    for exc_type, status in _STATUS_BY_TYPE:
        if isinstance(exc, exc_type):
            extra = {}
            if isinstance(exc, CsvError):
                extra = {"row": exc.row, "column": exc.column}
            return ApiError(status, exc.code, str(exc), **extra)
    return ApiError(400, exc.code, str(exc))


def _series_to_json(values) -> list[float | None]:
    return [None if math.isnan(v) else float(v) for v in values]


def _frame_summary(name: str, frame: TimeSeriesFrame, **extra) -> dict:
    date_range = frame.date_range
    summary = {
        "name": name,
        "row_count": frame.row_count,
        "date_range": (
            {"start": date_range[0].isoformat(), "end": date_range[1].isoformat()}
            if date_range
            else None
        ),
        "columns": list(frame.column_names),
    }
    summary.update(extra)
    return summary


def create_app(
    state: SessionState | None = None,
    *,
    remote_config: RemoteEndpointConfig | None = None,
    static_dir: Path | str | None = None,
) -> FastAPI:
    """Build the service app around a session (a fresh one by default)."""
    state = state if state is not None else SessionState()
    remote = remote_config or RemoteEndpointConfig()
    app = FastAPI(title="mova service", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return exc.response()

    @app.exception_handler(MovaError)
    async def handle_mova_error(request: Request, exc: MovaError):
        return _to_api_error(exc).response()

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return ApiError(400, "validation_error", str(exc.errors())).response()

    def _get_frame(name: str) -> TimeSeriesFrame:
        frame = state.frames.get(name)
        if frame is None:
            raise ApiError(404, "unknown_frame", f"no frame named {name!r} is loaded")
        return frame

    @app.post("/api/frames", status_code=201)
    async def upload_frame(name: str = Form(...), file: UploadFile = File(...)):
        name = name.strip()
        if not name:
            raise ApiError(400, "invalid_name", "frame name may not be empty")
        body = await file.read(MAX_UPLOAD_BYTES + 1)
        if len(body) > MAX_UPLOAD_BYTES:
            raise ApiError(413, "payload_too_large", "upload exceeds the 50 MB cap")
        frame = load_csv(body, source_label=file.filename or name)
        with state.lock:
            state.frames[name] = frame
        return _frame_summary(name, frame)

    @app.get("/api/frames/{name}")
    def frame_rows(
        name: str,
        date_from: str | None = Query(default=None, alias="from"),
        date_to: str | None = Query(default=None, alias="to"),
    ):
        frame = _get_frame(name)
        try:
            lo = parse_date(date_from) if date_from else None
            hi = parse_date(date_to) if date_to else None
        except CsvError as exc:
            raise ApiError(400, exc.code, str(exc)) from None
        if lo is not None and hi is not None and lo > hi:
            raise ApiError(
                400, "invalid_range", f"from {lo.isoformat()} is after to {hi.isoformat()}"
            )
        names = frame.column_names
        columns = [frame.columns[c] for c in names]
        rows = []
        for i, date in enumerate(frame.dates):
            if lo is not None and date < lo:
                continue
            if hi is not None and date > hi:
                continue
            row: dict = {"date": date.isoformat()}
            for c, col in zip(names, columns):
                v = col[i]
                row[c] = None if math.isnan(v) else float(v)
            rows.append(row)
        return {"name": name, "row_count": len(rows), "columns": list(names), "rows": rows}

    @app.get("/api/frames/{name}/indicators")
    def frame_indicators(name: str, spec: str | None = Query(default=None)):
        frame = _get_frame(name)
        if spec:
            specs = parse_spec_list(spec, default_period=state.default_period)
        else:
            specs = default_indicators(state.default_period)
        out = []
        for item in specs:
            series = indicators.compute_indicator(frame, item)
            out.append(
                {
                    "kind": item.kind.value,
                    "period": item.period,
                    "source_column": item.source_column,
                    "label": item.label,
                    "values": _series_to_json(series.values),
                }
            )
        return {"frame": name, "row_count": frame.row_count, "indicators": out}

    @app.get("/api/quotes/{symbol}")
    def fetch_quote(symbol: str):
        ref = parse_symbol(symbol)
        result = state.quote_cache.get_or_fetch(ref, remote)
        key = ref.render()
        with state.lock:
            state.frames[key] = result.frame
        return _frame_summary(key, result.frame, stale=result.stale)

    @app.get("/api/config")
    def get_config():
        return {"default_period": state.default_period}

    @app.put("/api/config")
    async def put_config(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "invalid_body", "expected a JSON object") from None
        if not isinstance(body, dict) or "default_period" not in body:
            raise ApiError(400, "invalid_body", "expected {\"default_period\": n}")
        period = body["default_period"]
        if isinstance(period, bool) or not isinstance(period, int) or period < 1:
            raise ApiError(
                400, "invalid_period", f"default_period must be a positive integer, got {period!r}"
            )
        with state.lock:
            state.default_period = period
        return {"default_period": state.default_period}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="webui")

    return app
