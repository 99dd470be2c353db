"""Exception hierarchy.

Every error raised by the package derives from :class:`STLFError`, so the CLI
can map the whole family to exit code 1 with a single ``except``.
"""

from __future__ import annotations

from typing import Optional


class STLFError(Exception):
    """Base class for data, model and pipeline errors."""


# regression

class EmptyInputError(STLFError):
    pass


class RaggedRowsError(STLFError):
    pass


class NonFiniteValueError(STLFError):
    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class DimensionMismatchError(STLFError):
    pass


class RankDeficientError(STLFError):
    def __init__(self, rank: int, threshold: float, cols: int):
        super().__init__(
            f"design matrix is rank deficient: estimated rank {rank} of {cols} "
            f"columns (|R_ii| threshold {threshold:.3e})"
        )
        self.rank = rank
        self.threshold = threshold
        self.cols = cols


class DegenerateXError(STLFError):
    pass


# series / features

class SeriesTooShortError(STLFError):
    pass


class NonConsecutiveTimestampsError(STLFError):
    pass


class UnsortedSeriesError(STLFError):
    pass


class InsufficientDataError(STLFError):
    pass


# file formats

class LocatedError(STLFError):
    """An error that can point at a line (and optionally a column) of a file."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[str] = None):
        self.reason = message
        self.line = line
        self.column = column
        super().__init__(self._format())

    def _format(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column!r}")
        return f"{', '.join(where)}: {self.reason}" if where else self.reason


class BadHeaderError(LocatedError):
    pass


class ParseError(LocatedError):
    pass


class RangeViolationError(LocatedError):
    pass


class GapInSeriesError(LocatedError):
    pass


class VersionMismatchError(STLFError):
    pass


class SchemaMismatchError(STLFError):
    pass


class MalformedFileError(STLFError):
    pass


class IoFailureError(STLFError):
    pass


class UnknownFixtureError(STLFError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""
