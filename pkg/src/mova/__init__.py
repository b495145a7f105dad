"""Moving-average workbench: SMA, WMA, and EMA over daily OHLCV data.

The package exposes batch and streaming indicator computation, CSV
ingestion with column normalization, a cached remote-quote client, a local
JSON-over-HTTP service, and deterministic SVG chart rendering.
"""

from .errors import MovaError
from .indicators import (
    EmaState,
    SmaState,
    WmaState,
    compute_indicator,
    ema,
    ema_weights,
    make_ema_state,
    make_sma_state,
    make_wma_state,
    sma,
    wma,
    wma_weights,
)
from .ingest import dump_csv, load_csv, normalize_columns, parse_date
from .model import (
    DEFAULT_PERIOD,
    IndicatorSeries,
    IndicatorSpec,
    Kind,
    PlotConfig,
    PlotType,
    SymbolRef,
    TimeSeriesFrame,
    Viewport,
    default_indicators,
    parse_indicator_spec,
    parse_spec_list,
    parse_symbol,
)
from .plotting import render_chart
from .remote import QuoteCache, QuoteResult, RemoteEndpointConfig, fetch
from .service import SessionState, create_app

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PERIOD",
    "EmaState",
    "IndicatorSeries",
    "IndicatorSpec",
    "Kind",
    "MovaError",
    "PlotConfig",
    "PlotType",
    "QuoteCache",
    "QuoteResult",
    "RemoteEndpointConfig",
    "SessionState",
    "SmaState",
    "SymbolRef",
    "TimeSeriesFrame",
    "Viewport",
    "WmaState",
    "compute_indicator",
    "create_app",
    "default_indicators",
    "dump_csv",
    "ema",
    "ema_weights",
    "fetch",
    "load_csv",
    "make_ema_state",
    "make_sma_state",
    "make_wma_state",
    "normalize_columns",
    "parse_date",
    "parse_indicator_spec",
    "parse_spec_list",
    "parse_symbol",
    "render_chart",
    "sma",
    "wma",
    "wma_weights",
]
