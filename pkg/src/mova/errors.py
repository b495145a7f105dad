"""Exception hierarchy shared across the package.

Every error type carries a stable ``code`` string so the HTTP service and
the CLI can report machine-readable failures without matching on types or
message text.
"""

from __future__ import annotations


class MovaError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class UnknownColumnError(MovaError):
    code = "unknown_column"


class MalformedSymbolError(MovaError):
    code = "malformed_symbol"


class PeriodError(MovaError):
    """Raised for non-positive indicator periods."""

    code = "invalid_period"


class MalformedSpecError(MovaError):
    """Raised when an indicator spec string cannot be parsed."""

    code = "malformed_spec"


class CsvError(MovaError):
    """Input-data error, located by file coordinates where available.

    ``row`` is the 1-based line number in the original file (the header is
    line 1); ``column`` is the offending column's name.
    """

    code = "csv_error"

    def __init__(self, message: str, *, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class EmptyFileError(CsvError):
    code = "empty_file"


class RaggedRowError(CsvError):
    code = "ragged_row"


class NonNumericCellError(CsvError):
    code = "non_numeric_cell"


class DateParseError(CsvError):
    code = "bad_date"


class MixedDateFormatError(CsvError):
    code = "mixed_date_formats"


class DuplicateDateError(CsvError):
    code = "duplicate_date"


class DuplicateColumnError(CsvError):
    code = "duplicate_column"


class NoDataColumnsError(CsvError):
    code = "no_data_columns"


class RemoteError(MovaError):
    code = "remote_error"


class NetworkFailureError(RemoteError):
    code = "network_failure"


class UnknownSymbolError(RemoteError):
    code = "unknown_symbol"


class MalformedPayloadError(RemoteError):
    code = "malformed_payload"
