"""Simple, weighted, and exponential moving averages, batch and streaming.

All three averages share one warm-up rule: the first defined output sits at
index ``period - 1``. Non-finite inputs (NaN or infinity) are treated as
undefined values, not errors: SMA and WMA yield an undefined output for any
window containing one, and EMA drops its running value and re-seeds over
the next ``period`` defined inputs.

The streaming states reproduce the batch outputs bit-for-bit. To keep that
guarantee, each window is re-summed with the same numpy expression on both
paths; do not "optimize" one side without the other.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from .errors import PeriodError
from .model import IndicatorSeries, IndicatorSpec, Kind, TimeSeriesFrame


def _check_period(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise PeriodError(f"period must be a positive integer, got {n!r}")


def _clean(values) -> np.ndarray:
    """Copy to float64 with every non-finite value mapped to NaN."""
    v = np.array(values, dtype=np.float64, copy=True)
    v[~np.isfinite(v)] = np.nan
    return v


def sma(values, n: int) -> np.ndarray:
    """Arithmetic mean of each trailing window of ``n`` values.

    Output is NaN for the first ``n - 1`` positions and for any window
    containing an undefined value.
    """
    _check_period(n)
    v = _clean(values)
    out = np.full(v.shape, np.nan)
    for i in range(n - 1, len(v)):
        out[i] = np.sum(v[i - n + 1 : i + 1]) / n
    return out


def wma_weights(n: int) -> np.ndarray:
    """Linearly increasing weights ``[1..n] / (n(n+1)/2)``, oldest first.

    The newest datum carries the largest weight; the vector sums to 1.
    """
    _check_period(n)
    return np.arange(1, n + 1, dtype=np.float64) / (n * (n + 1) / 2)


def wma(values, n: int) -> np.ndarray:
    """Weighted mean of each trailing window, newest value weighted most."""
    _check_period(n)
    v = _clean(values)
    w = wma_weights(n)
    out = np.full(v.shape, np.nan)
    for i in range(n - 1, len(v)):
        out[i] = np.sum(w * v[i - n + 1 : i + 1])
    return out


def ema(values, n: int) -> np.ndarray:
    """Exponential moving average with smoothing factor ``2 / (n + 1)``.

    The value at index ``n - 1`` is the arithmetic mean of the first ``n``
    inputs (the seed); afterwards each output follows the recursion
    ``q * x + (1 - q) * previous``. An undefined input discards the running
    value; output resumes after the next ``n`` consecutive defined inputs.
    """
    _check_period(n)
    v = _clean(values)
    q = 2.0 / (n + 1.0)
    out = np.full(v.shape, np.nan)
    run = 0
    prev = math.nan
    seeded = False
    for i in range(len(v)):
        x = v[i]
        if math.isnan(x):
            run = 0
            seeded = False
            continue
        if seeded:
            prev = q * x + (1.0 - q) * prev
            out[i] = prev
        else:
            run += 1
            if run == n:
                prev = np.sum(v[i - n + 1 : i + 1]) / n
                out[i] = prev
                seeded = True
    return out


def ema_weights(n: int) -> np.ndarray:
    """Normalized geometric weights of the EMA window, newest first.

    Weight ``i`` is proportional to ``(1 - q) ** i`` with ``q = 2/(n+1)``;
    the vector sums to 1.
    """
    _check_period(n)
    if n == 1:
        return np.ones(1)
    q = 2.0 / (n + 1.0)
    raw = q * np.power(1.0 - q, np.arange(n, dtype=np.float64))
    return raw / np.sum(raw)


class SmaState:
    """Incremental SMA over the last ``period`` pushed values.

    The window is re-summed on every push so outputs match :func:`sma`
    bit-for-bit (a running sum would drift on adversarial inputs).
    """

    def __init__(self, period: int):
        _check_period(period)
        self.period = period
        self.buffer: deque[float] = deque(maxlen=period)

    def push(self, value: float) -> float:
        """Feed one value; returns the current average or NaN while warming up."""
        x = float(value)
        self.buffer.append(x if math.isfinite(x) else math.nan)
        if len(self.buffer) < self.period:
            return math.nan
        window = np.asarray(self.buffer, dtype=np.float64)
        return float(np.sum(window) / self.period)


class WmaState:
    """Incremental WMA over the last ``period`` pushed values."""

    def __init__(self, period: int):
        _check_period(period)
        self.period = period
        self.buffer: deque[float] = deque(maxlen=period)
        self._weights = wma_weights(period)

    def push(self, value: float) -> float:
        """Feed one value; returns the current average or NaN while warming up."""
        x = float(value)
        self.buffer.append(x if math.isfinite(x) else math.nan)
        if len(self.buffer) < self.period:
            return math.nan
        window = np.asarray(self.buffer, dtype=np.float64)
        return float(np.sum(self._weights * window))


class EmaState:
    """Incremental EMA with SMA seeding and re-seed after undefined inputs.

    ``current`` holds the last emitted value; it is NaN until ``period``
    consecutive defined values have been pushed, and drops back to NaN
    whenever an undefined value arrives.
    """

    def __init__(self, period: int):
        _check_period(period)
        self.period = period
        self.q = 2.0 / (period + 1.0)
        self.seed_buffer: deque[float] = deque(maxlen=period)
        self.current = math.nan

    def push(self, value: float) -> float:
        """Feed one value; returns the current average or NaN while unseeded."""
        x = float(value)
        if not math.isfinite(x):
            self.seed_buffer.clear()
            self.current = math.nan
            return math.nan
        if not math.isnan(self.current):
            self.current = self.q * x + (1.0 - self.q) * self.current
            return self.current
        self.seed_buffer.append(x)
        if len(self.seed_buffer) < self.period:
            return math.nan
        window = np.asarray(self.seed_buffer, dtype=np.float64)
        self.current = float(np.sum(window) / self.period)
        self.seed_buffer.clear()
        return self.current


def make_sma_state(period: int) -> SmaState:
    return SmaState(period)


def make_wma_state(period: int) -> WmaState:
    return WmaState(period)


def make_ema_state(period: int) -> EmaState:
    return EmaState(period)


_BATCH = {Kind.SMA: sma, Kind.WMA: wma, Kind.EMA: ema}


def compute_indicator(frame: TimeSeriesFrame, spec: IndicatorSpec) -> IndicatorSeries:
    """Compute one requested average over the named frame column."""
    values = frame.column(spec.source_column)
    return IndicatorSeries(spec=spec, values=_BATCH[spec.kind](values, spec.period))
