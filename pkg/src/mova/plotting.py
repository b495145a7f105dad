"""Static chart rendering: price marks plus indicator overlays, saved as SVG.

Output is deterministic: figures are built with the object-oriented
matplotlib API (no pyplot state), the SVG id hash salt is pinned, and no
creation timestamp is embedded, so identical inputs produce byte-identical
files.
"""

from __future__ import annotations

import math

import matplotlib as mpl
from matplotlib.figure import Figure
from matplotlib.patches import Rectangle

from .model import IndicatorSeries, PlotType, TimeSeriesFrame

_SVG_HASHSALT = "mova"

_UP_COLOR = "#1a9641"
_DOWN_COLOR = "#d7191c"
_PRICE_COLOR = "#303030"

_MAX_DATE_TICKS = 8


def _date_ticks(frame: TimeSeriesFrame):
    n = frame.row_count
    if n == 0:
        return [], []
    step = max(1, math.ceil(n / _MAX_DATE_TICKS))
    positions = list(range(0, n, step))
    labels = [frame.dates[i].isoformat() for i in positions]
    return positions, labels


def _draw_candles(ax, frame: TimeSeriesFrame):
    opens = frame.column("Open")
    highs = frame.column("High")
    lows = frame.column("Low")
    closes = frame.column("Close")
    width = 0.6
    for i in range(frame.row_count):
        o, h, l, c = opens[i], highs[i], lows[i], closes[i]
        if any(math.isnan(v) for v in (o, h, l, c)):
            continue
        color = _UP_COLOR if c >= o else _DOWN_COLOR
        ax.vlines(i, l, h, colors=color, linewidth=1.0, zorder=2)
        if c == o:
            ax.hlines(o, i - width / 2, i + width / 2, colors=color, linewidth=1.2, zorder=3)
        else:
            ax.add_patch(
                Rectangle(
                    (i - width / 2, min(o, c)),
                    width,
                    abs(c - o),
                    facecolor=color,
                    edgecolor=color,
                    linewidth=0.5,
                    zorder=3,
                )
            )


def _draw_ohlc_bars(ax, frame: TimeSeriesFrame):
    opens = frame.column("Open")
    highs = frame.column("High")
    lows = frame.column("Low")
    closes = frame.column("Close")
    tick = 0.3
    for i in range(frame.row_count):
        o, h, l, c = opens[i], highs[i], lows[i], closes[i]
        if any(math.isnan(v) for v in (o, h, l, c)):
            continue
        color = _UP_COLOR if c >= o else _DOWN_COLOR
        ax.vlines(i, l, h, colors=color, linewidth=1.2, zorder=2)
        ax.hlines(o, i - tick, i, colors=color, linewidth=1.2, zorder=2)
        ax.hlines(c, i, i + tick, colors=color, linewidth=1.2, zorder=2)


def render_chart(
    frame: TimeSeriesFrame,
    series: list[IndicatorSeries] | tuple[IndicatorSeries, ...],
    plot_type: PlotType,
    output,
    *,
    title: str | None = None,
) -> None:
    """Render the frame and indicator overlays to ``output`` as SVG.

    ``output`` may be a path or a writable binary file object. Indicator
    polylines skip undefined slots; the legend lists each indicator's
    canonical label. An empty frame still yields valid axes and a legend.
    """
    plot_type = PlotType(plot_type)
    fig = Figure(figsize=(10.0, 5.5), dpi=100)
    ax = fig.add_subplot()
    n = frame.row_count
    x = range(n)

    if n == 0:
        ax.text(
            0.5, 0.5, "no data", transform=ax.transAxes,
            ha="center", va="center", color="#808080",
        )
    elif plot_type is PlotType.LINE:
        ax.plot(x, frame.column("Close"), color=_PRICE_COLOR, linewidth=1.4, label="Close")
    elif plot_type is PlotType.CANDLE:
        _draw_candles(ax, frame)
    else:
        _draw_ohlc_bars(ax, frame)

    for item in series:
        ax.plot(
            range(len(item.values)), item.values,
            linewidth=1.2, label=item.spec.label, zorder=4,
        )

    positions, labels = _date_ticks(frame)
    ax.set_xticks(positions)
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    if n > 0:
        ax.set_xlim(-0.5, n - 0.5)
    ax.grid(True, color="#dddddd", linewidth=0.6, zorder=0)
    if title:
        ax.set_title(title)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="upper left", fontsize=9)
    fig.subplots_adjust(left=0.08, right=0.97, top=0.95, bottom=0.16)

    # fonttype "none" keeps labels as literal <text> nodes instead of glyph
    # paths, so the legend text is inspectable in the output.
    with mpl.rc_context({"svg.hashsalt": _SVG_HASHSALT, "svg.fonttype": "none"}):
        fig.savefig(output, format="svg", metadata={"Date": None})
