"""CSV ingestion: date parsing, column normalization, load and export.

The wire format is UTF-8 CSV with a mandatory header row and the first
column holding the date. Two date formats are accepted, DD.MM.YYYY and
ISO YYYY-MM-DD, but a single file must stick to one of them. Numeric
cells use '.' as the decimal separator; an empty cell is a missing value.
Exports always write ISO dates and shortest-round-trip floats, so a
load -> export -> load cycle reproduces the frame exactly.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import math
import re

import numpy as np

from .errors import (
    DateParseError,
    DuplicateColumnError,
    DuplicateDateError,
    EmptyFileError,
    MixedDateFormatError,
    NoDataColumnsError,
    NonNumericCellError,
    RaggedRowError,
)
from .model import OHLC_COLUMNS, TimeSeriesFrame

_DOTTED_RE = re.compile(r"^(\d{1,2})\.(\d{1,2})\.(\d{4})$")
_ISO_RE = re.compile(r"^(\d{4})-(\d{1,2})-(\d{1,2})$")

# Strict decimal syntax: no thousands separators, no underscores, no
# textual NaN/inf. Missing values are empty cells, nothing else.
_NUMBER_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")

_CANONICAL = {name.lower(): name for name in OHLC_COLUMNS}


def parse_date(text: str, row: int | None = None) -> dt.date:
    """Parse DD.MM.YYYY or YYYY-MM-DD into a calendar date.

    Impossible dates (such as 31.02.2021) are rejected. ``row`` is only
    used to locate the error in the source file.
    """
    text = text.strip()
    m = _DOTTED_RE.match(text)
    if m:
        day, month, year = (int(g) for g in m.groups())
    else:
        m = _ISO_RE.match(text)
        if not m:
            raise DateParseError(
                f"unparseable date {text!r}: expected DD.MM.YYYY or YYYY-MM-DD", row=row
            )
        year, month, day = (int(g) for g in m.groups())
    try:
        return dt.date(year, month, day)
    except ValueError:
        raise DateParseError(f"impossible calendar date {text!r}", row=row) from None


def _detect_date_format(text: str, row: int) -> str:
    if _DOTTED_RE.match(text):
        return "DMY_DOTTED"
    if _ISO_RE.match(text):
        return "ISO"
    raise DateParseError(
        f"unparseable date {text!r}: expected DD.MM.YYYY or YYYY-MM-DD", row=row
    )


def _parse_cell(text: str, row: int, column: str) -> float:
    text = text.strip()
    if not text:
        return math.nan
    if not _NUMBER_RE.match(text):
        raise NonNumericCellError(
            f"non-numeric value {text!r} at row {row}, column {column!r}",
            row=row,
            column=column,
        )
    return float(text)


def load_csv(source, source_label: str = "") -> TimeSeriesFrame:
    """Parse CSV bytes (or a binary stream) into a normalized frame.

    Rows are sorted by date; duplicate dates, ragged rows, and non-numeric
    cells are rejected with their file coordinates. The result always
    carries the full Open/High/Low/Close quadruple (see
    :func:`normalize_columns`).
    """
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = source
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    if not text.strip():
        raise EmptyFileError("empty input: expected a CSV header row")

    lines = text.splitlines()
    header_line = lines[0]
    delimiter = ","
    if "," not in header_line and ";" in header_line:
        delimiter = ";"

    reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter)
    rows = list(reader)
    header = [cell.strip() for cell in rows[0]]
    names = header[1:]
    seen = set()
    for name in names:
        key = _CANONICAL.get(name.lower(), name)
        if key in seen:
            raise DuplicateColumnError(f"duplicate column name {name!r}", row=1, column=name)
        seen.add(key)

    dates: list[dt.date] = []
    date_rows: dict[dt.date, int] = {}
    cells: list[list[float]] = []
    date_format: str | None = None
    for line_no, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise RaggedRowError(
                f"row {line_no} has {len(row)} cells, expected {len(header)}", row=line_no
            )
        date_text = row[0].strip()
        fmt = _detect_date_format(date_text, line_no)
        if date_format is None:
            date_format = fmt
        elif fmt != date_format:
            raise MixedDateFormatError(
                f"mixed date formats: row {line_no} uses {fmt}, file uses {date_format}",
                row=line_no,
            )
        date = parse_date(date_text, row=line_no)
        if date in date_rows:
            raise DuplicateDateError(
                f"duplicate date {date.isoformat()} at row {line_no} "
                f"(first seen at row {date_rows[date]})",
                row=line_no,
            )
        date_rows[date] = line_no
        dates.append(date)
        cells.append([_parse_cell(row[j + 1], line_no, names[j]) for j in range(len(names))])

    columns = {
        name: np.array([r[j] for r in cells], dtype=np.float64)
        for j, name in enumerate(names)
    }
    frame = TimeSeriesFrame(dates=tuple(dates), columns=columns, source_label=source_label)
    return normalize_columns(frame)


def normalize_columns(frame: TimeSeriesFrame) -> TimeSeriesFrame:
    """Guarantee the Open/High/Low/Close quadruple exists.

    Column names matching the four canonical names case-insensitively are
    renamed to canonical form. If the full quadruple is then present the
    frame passes through unchanged; otherwise the first data column's
    values are copied into all four, keeping the original column, with
    missing names appended in canonical order. Idempotent.
    """
    renamed: dict[str, np.ndarray] = {}
    for name, values in frame.columns.items():
        canonical = _CANONICAL.get(name.strip().lower(), name.strip())
        if canonical in renamed:
            raise DuplicateColumnError(
                f"columns collide after normalization: {name!r}", column=name
            )
        renamed[canonical] = values
    if not renamed:
        raise NoDataColumnsError("no data columns beyond the date column")
    if all(name in renamed for name in OHLC_COLUMNS):
        return TimeSeriesFrame(
            dates=frame.dates, columns=renamed, source_label=frame.source_label
        )
    first = next(iter(renamed.values()))
    columns = {name: (first if name in OHLC_COLUMNS else values) for name, values in renamed.items()}
    for name in OHLC_COLUMNS:
        if name not in columns:
            columns[name] = first
    return TimeSeriesFrame(dates=frame.dates, columns=columns, source_label=frame.source_label)


def _format_value(value: float) -> str:
    if math.isnan(value):
        return ""
    return repr(float(value))


def dump_csv(frame: TimeSeriesFrame) -> str:
    """Serialize a frame to CSV with ISO dates and exact float round-trip."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["Date", *frame.column_names])
    columns = [frame.columns[name] for name in frame.column_names]
    for i, date in enumerate(frame.dates):
        writer.writerow([date.isoformat(), *(_format_value(col[i]) for col in columns)])
    return out.getvalue()
