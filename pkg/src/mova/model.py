"""Shared data types: frames, indicator specs, symbols, and plot config.

``TimeSeriesFrame`` is the universal data carrier: a date-indexed table of
named numeric columns. Frames and indicator results are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DuplicateDateError,
    MalformedSpecError,
    MalformedSymbolError,
    PeriodError,
    UnknownColumnError,
)

DEFAULT_PERIOD = 20

OHLC_COLUMNS = ("Open", "High", "Low", "Close")


class Kind(str, Enum):
    """Supported moving-average kinds."""

    SMA = "SMA"
    WMA = "WMA"
    EMA = "EMA"


class PlotType(str, Enum):
    """Supported chart styles."""

    LINE = "line"
    CANDLE = "candle"
    OHLC = "ohlc"


def _freeze(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeriesFrame:
    """Date-indexed table of numeric columns.

    Construction sorts rows by date and rejects duplicate dates, so any
    permutation of the same rows yields an identical frame. Missing values
    are explicit NaN slots, never absent rows. ``source_label`` records
    provenance (file path or symbol) and does not participate in equality.
    """

    dates: tuple[dt.date, ...]
    columns: dict[str, np.ndarray]
    source_label: str = ""

    def __post_init__(self):
        dates = [d.date() if isinstance(d, dt.datetime) else d for d in self.dates]
        order = sorted(range(len(dates)), key=lambda i: dates[i])
        dates = [dates[i] for i in order]
        for a, b in zip(dates, dates[1:]):
            if a == b:
                raise DuplicateDateError(f"duplicate date {a.isoformat()}")
        columns: dict[str, np.ndarray] = {}
        for name, values in self.columns.items():
            arr = np.asarray(values, dtype=np.float64)
            if arr.ndim != 1 or len(arr) != len(dates):
                raise ValueError(
                    f"column {name!r} has {arr.size} values for {len(dates)} dates"
                )
            columns[name] = _freeze(arr[order])
        object.__setattr__(self, "dates", tuple(dates))
        object.__setattr__(self, "columns", columns)

    @property
    def row_count(self) -> int:
        return len(self.dates)

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(self.columns)

    @property
    def date_range(self) -> tuple[dt.date, dt.date] | None:
        if not self.dates:
            return None
        return self.dates[0], self.dates[-1]

    def column(self, name: str) -> np.ndarray:
        """Return one column in date order, same length as ``dates``."""
        try:
            return self.columns[name]
        except KeyError:
            available = ", ".join(self.columns) or "(none)"
            raise UnknownColumnError(
                f"unknown column {name!r}; available columns: {available}"
            ) from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeriesFrame):
            return NotImplemented
        return (
            self.dates == other.dates
            and list(self.columns) == list(other.columns)
            and all(
                np.array_equal(self.columns[c], other.columns[c], equal_nan=True)
                for c in self.columns
            )
        )

    __hash__ = None


@dataclass(frozen=True)
class IndicatorSpec:
    """One requested moving average: kind, window length, source column."""

    kind: Kind
    period: int
    source_column: str = "Close"

    def __post_init__(self):
        if isinstance(self.period, bool) or not isinstance(self.period, (int, np.integer)):
            raise PeriodError(f"period must be a positive integer, got {self.period!r}")
        if self.period < 1:
            raise PeriodError(f"period must be >= 1, got {self.period}")
        object.__setattr__(self, "period", int(self.period))

    @property
    def label(self) -> str:
        """Canonical display label, e.g. ``SMA(3)``.

        The source column is included only when it is not Close, keeping
        labels unique when one request mixes columns.
        """
        if self.source_column == "Close":
            return f"{self.kind.value}({self.period})"
        return f"{self.kind.value}({self.period}, {self.source_column})"


@dataclass(frozen=True, eq=False)
class IndicatorSeries:
    """Computed average aligned index-for-index with a frame's dates.

    ``values`` holds NaN in every undefined slot; ``warmup_len`` is the
    number of leading undefined slots (period - 1 for gap-free input).
    """

    spec: IndicatorSpec
    values: np.ndarray
    warmup_len: int = field(default=-1)

    def __post_init__(self):
        values = _freeze(self.values)
        defined = np.flatnonzero(~np.isnan(values))
        warmup = int(defined[0]) if defined.size else len(values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "warmup_len", warmup)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndicatorSeries):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(
            self.values, other.values, equal_nan=True
        )

    __hash__ = None


@dataclass(frozen=True)
class SymbolRef:
    """Remote-data identifier rendered as ``TICKER.COUNTRY``."""

    ticker: str
    country: str

    def __post_init__(self):
        ticker = self.ticker.strip().upper()
        country = self.country.strip().upper()
        if not ticker:
            raise MalformedSymbolError("symbol ticker may not be empty")
        if not country:
            raise MalformedSymbolError("symbol country may not be empty")
        if "." in country:
            raise MalformedSymbolError(f"symbol country may not contain a dot: {country!r}")
        object.__setattr__(self, "ticker", ticker)
        object.__setattr__(self, "country", country)

    def render(self) -> str:
        return f"{self.ticker}.{self.country}"

    def __str__(self) -> str:
        return self.render()


def parse_symbol(text: str) -> SymbolRef:
    """Parse ``ticker.country``, splitting on the last dot.

    Both parts are trimmed and uppercased; tickers may themselves contain
    dots. Raises :class:`MalformedSymbolError` when there is no dot or
    either part is empty.
    """
    text = text.strip()
    ticker, sep, country = text.rpartition(".")
    if not sep:
        raise MalformedSymbolError(
            f"malformed symbol {text!r}: expected ticker.country, e.g. EBAY.US"
        )
    return SymbolRef(ticker, country)


_SPEC_RE = re.compile(r"^\s*(?P<kind>[A-Za-z]+)\s*(?::(?P<period>[^:]*))?(?::(?P<column>.+))?$")


def parse_indicator_spec(text: str, default_period: int = DEFAULT_PERIOD) -> IndicatorSpec:
    """Parse one ``kind[:period[:column]]`` spec string.

    The kind is case-insensitive; an omitted or empty period falls back to
    ``default_period``; the column defaults to Close.
    """
    m = _SPEC_RE.match(text)
    if not m:
        raise MalformedSpecError(f"malformed indicator spec {text!r}")
    kind_text = m.group("kind").upper()
    try:
        kind = Kind(kind_text)
    except ValueError:
        valid = ", ".join(k.value for k in Kind)
        raise MalformedSpecError(
            f"unknown indicator kind {m.group('kind')!r}; valid kinds: {valid}"
        ) from None
    period_text = (m.group("period") or "").strip()
    if period_text:
        try:
            period = int(period_text)
        except ValueError:
            raise MalformedSpecError(
                f"malformed period {period_text!r} in spec {text!r}"
            ) from None
    else:
        period = default_period
    column = (m.group("column") or "").strip() or "Close"
    return IndicatorSpec(kind, period, column)


def parse_spec_list(text: str, default_period: int = DEFAULT_PERIOD) -> tuple[IndicatorSpec, ...]:
    """Parse a comma-separated list of indicator spec strings."""
    items = [part for part in text.split(",") if part.strip()]
    if not items:
        raise MalformedSpecError("empty indicator spec list")
    return tuple(parse_indicator_spec(part, default_period) for part in items)


def default_indicators(period: int = DEFAULT_PERIOD, source_column: str = "Close") -> tuple[IndicatorSpec, ...]:
    """One SMA, one WMA, one EMA sharing a default period."""
    return tuple(IndicatorSpec(kind, period, source_column) for kind in Kind)


@dataclass(frozen=True)
class Viewport:
    """Explicit chart window; ``None`` in PlotConfig means auto-fit."""

    x_min_date: dt.date
    x_max_date: dt.date
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.x_min_date >= self.x_max_date:
            raise ValueError("viewport requires x_min_date < x_max_date")
        if not self.y_min < self.y_max:
            raise ValueError("viewport requires y_min < y_max")


@dataclass(frozen=True)
class PlotConfig:
    """Plot type, requested indicators, and viewport shared with the UI."""

    plot_type: PlotType = PlotType.LINE
    indicators: tuple[IndicatorSpec, ...] = field(default_factory=default_indicators)
    viewport: Viewport | None = None

    def __post_init__(self):
        if not isinstance(self.plot_type, PlotType):
            object.__setattr__(self, "plot_type", PlotType(self.plot_type))
