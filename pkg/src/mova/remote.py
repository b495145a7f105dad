"""Remote quote client: fetch daily OHLCV CSV and cache it in memory.

The endpoint is a URL template with a single ``{symbol}`` placeholder, so
tests and alternative providers substitute freely; the default targets
Stooq's public daily-history CSV download. All parsing is delegated to
:mod:`mova.ingest`.
"""

from __future__ import annotations

import threading
import time
import urllib.error
import urllib.request
from concurrent.futures import Future
from dataclasses import dataclass

from .errors import (
    CsvError,
    MalformedPayloadError,
    NetworkFailureError,
    UnknownSymbolError,
)
from .ingest import load_csv
from .model import SymbolRef, TimeSeriesFrame

STOOQ_DAILY_TEMPLATE = "https://stooq.com/q/d/l/?s={symbol}&i=d"

DEFAULT_TTL_SECONDS = 15 * 60.0

_USER_AGENT = "mova/0.1 (+daily OHLCV client)"


@dataclass(frozen=True)
class RemoteEndpointConfig:
    """Where and how to download quote history.

    ``base_url_template`` must contain exactly one ``{symbol}`` placeholder.
    Retries use exponential backoff (0.5 s then 1 s by default).
    """

    base_url_template: str = STOOQ_DAILY_TEMPLATE
    timeout: float = 10.0
    max_retries: int = 2
    backoff: tuple[float, ...] = (0.5, 1.0)
    max_response_bytes: int = 50 * 1024 * 1024

    def __post_init__(self):
        if self.base_url_template.count("{symbol}") != 1:
            raise ValueError(
                "base_url_template must contain exactly one {symbol} placeholder"
            )

    def url_for(self, symbol: SymbolRef) -> str:
        # Stooq expects lowercase symbols; harmless for other providers.
        return self.base_url_template.format(symbol=symbol.render().lower())


def fetch(
    symbol: SymbolRef,
    config: RemoteEndpointConfig | None = None,
    *,
    sleep=time.sleep,
) -> TimeSeriesFrame:
    """Download and parse one symbol's daily history.

    Network failures are retried ``max_retries`` times with backoff. An
    empty body or the endpoint's "no data" marker raises
    :class:`UnknownSymbolError`; anything unparseable raises
    :class:`MalformedPayloadError` wrapping the ingest error.
    """
    config = config or RemoteEndpointConfig()
    url = config.url_for(symbol)
    request = urllib.request.Request(url, headers={"User-Agent": _USER_AGENT})
    last_error: Exception | None = None
    for attempt in range(config.max_retries + 1):
        try:
            with urllib.request.urlopen(request, timeout=config.timeout) as response:
                body = response.read(config.max_response_bytes + 1)
            break
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                raise UnknownSymbolError(
                    f"no data for symbol {symbol.render()} (HTTP 404)"
                ) from exc
            last_error = exc
        except (urllib.error.URLError, TimeoutError, OSError) as exc:
            last_error = exc
        if attempt < config.max_retries:
            sleep(config.backoff[min(attempt, len(config.backoff) - 1)])
    else:
        raise NetworkFailureError(
            f"fetch failed for {symbol.render()} after "
            f"{config.max_retries + 1} attempts: {last_error}"
        ) from last_error

    if len(body) > config.max_response_bytes:
        raise MalformedPayloadError(
            f"response for {symbol.render()} exceeds {config.max_response_bytes} bytes"
        )
    text = body.decode("utf-8", errors="replace").strip()
    if not text or text.lower().startswith("no data"):
        raise UnknownSymbolError(f"no data for symbol {symbol.render()}")
    try:
        return load_csv(body, source_label=symbol.render())
    except CsvError as exc:
        raise MalformedPayloadError(
            f"unparseable payload for {symbol.render()}: {exc}"
        ) from exc


@dataclass(frozen=True)
class QuoteResult:
    """A cached or fresh frame; ``stale`` marks a degraded-mode result."""

    frame: TimeSeriesFrame
    stale: bool = False


@dataclass
class _Entry:
    frame: TimeSeriesFrame
    fetched_at: float


class QuoteCache:
    """In-memory store of downloaded frames, one entry per symbol.

    Entries are keyed by the symbol's rendered form, so differently-cased
    requests share one entry. Concurrent misses for the same symbol
    coalesce into a single network request, and when a refresh fails an
    expired entry is served flagged as stale rather than failing hard.
    """

    def __init__(self, ttl: float = DEFAULT_TTL_SECONDS, *, clock=time.monotonic):
        self.ttl = ttl
        self._clock = clock
        self._entries: dict[str, _Entry] = {}
        self._inflight: dict[str, Future] = {}
        self._lock = threading.Lock()

    def _fresh(self, entry: _Entry) -> bool:
        return self._clock() - entry.fetched_at < self.ttl

    def get_or_fetch(
        self,
        symbol: SymbolRef,
        config: RemoteEndpointConfig | None = None,
        *,
        fetcher=fetch,
    ) -> QuoteResult:
        """Return the cached frame when fresh, otherwise fetch and store."""
        key = symbol.render()
        while True:
            with self._lock:
                entry = self._entries.get(key)
                if entry is not None and self._fresh(entry):
                    return QuoteResult(entry.frame, stale=False)
                future = self._inflight.get(key)
                if future is None:
                    future = Future()
                    self._inflight[key] = future
                    leader = True
                else:
                    leader = False
            if not leader:
                return future.result()
            try:
                frame = fetcher(symbol, config)
            except Exception as exc:
                with self._lock:
                    stale_entry = self._entries.get(key)
                    self._inflight.pop(key, None)
                if stale_entry is not None:
                    result = QuoteResult(stale_entry.frame, stale=True)
                    future.set_result(result)
                    return result
                future.set_exception(exc)
                raise
            result = QuoteResult(frame, stale=False)
            with self._lock:
                self._entries[key] = _Entry(frame, self._clock())
                self._inflight.pop(key, None)
            future.set_result(result)
            return result

    def peek(self, symbol: SymbolRef) -> TimeSeriesFrame | None:
        """Return the cached frame regardless of freshness, if any."""
        with self._lock:
            entry = self._entries.get(symbol.render())
        return entry.frame if entry else None
