"""Series CSV ingestion, model files and the plain-text training export."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import (
    BadHeaderError,
    EmptyInputError,
    GapInSeriesError,
    IoFailureError,
    MalformedFileError,
    ParseError,
    RangeViolationError,
    SchemaMismatchError,
    VersionMismatchError,
)
from .features import HOUR, N_FEATURES, HourlyRecord, TrainingPair
from .regression import CoefficientVector

CSV_HEADER = ("timestamp", "load_mw", "temp_c", "wind_kmh", "cloud_pct")
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"
MODEL_FORMAT_VERSION = 1
MODEL_KEYS = (
    "format_version",
    "schema",
    "intercept",
    "coefficients",
    "trained_at",
    "training_rows",
    "metrics",
)
METRIC_KEYS = ("max_abs_deviation", "mape_percent", "r_squared")

PathLike = Union[str, os.PathLike]


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


def parse_timestamp(text: str) -> datetime:
    return datetime.strptime(text, TIMESTAMP_FORMAT).replace(tzinfo=timezone.utc)


def atomic_write(path: PathLike, data: Union[str, bytes]) -> None:
    """Write ``data`` to a sibling temp file, then rename it over ``path``."""
    path = Path(path)
    payload = data.encode("utf-8") if isinstance(data, str) else data
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


# --------------------------------------------------------------------------- CSV

def _read_text(source) -> Tuple[str, str]:
    if hasattr(source, "read"):
        return source.read(), getattr(source, "name", "<stream>")
    try:
        with open(source, encoding="utf-8", newline="") as fh:
            return fh.read(), str(source)
    except OSError as exc:
        raise IoFailureError(f"cannot read {source}: {exc.strerror}") from exc


def read_series_csv(source: Union[PathLike, IO[str]]) -> List[HourlyRecord]:
    """Parse and validate an hourly series file.

    Line numbers in errors are 1-based and count the header as line 1.
    """
    text, _ = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise BadHeaderError("file is empty", line=1) from None
    if tuple(header) != CSV_HEADER:
        raise BadHeaderError(f"expected header {','.join(CSV_HEADER)!r}, got {','.join(header)!r}", line=1)

    records: List[HourlyRecord] = []
    for row in reader:
        line = reader.line_num
        if len(row) != len(CSV_HEADER):
            raise ParseError(f"expected {len(CSV_HEADER)} fields, got {len(row)}", line=line)
        try:
            ts = parse_timestamp(row[0].strip())
        except ValueError:
            raise ParseError(f"bad timestamp {row[0]!r}", line=line, column="timestamp") from None
        values = []
        for name, cell in zip(CSV_HEADER[1:], row[1:]):
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(f"not a number: {cell!r}", line=line, column=name) from None
        try:
            record = HourlyRecord(ts, *values)
        except RangeViolationError as exc:
            column = dict(zip(("load", "temperature", "wind", "cloud"), CSV_HEADER[1:])).get(exc.column)
            raise RangeViolationError(exc.reason, line=line, column=column) from None

        if records and record.timestamp - records[-1].timestamp != HOUR:
            raise GapInSeriesError(
                f"expected {format_timestamp(records[-1].timestamp + HOUR)} after "
                f"{format_timestamp(records[-1].timestamp)}, got {format_timestamp(record.timestamp)}",
                line=line,
            )
        records.append(record)
    return records


def format_series_csv(records: Iterable[HourlyRecord]) -> str:
    out = io.StringIO()
    out.write(",".join(CSV_HEADER) + "\n")
    for r in records:
        out.write(",".join([format_timestamp(r.timestamp), *(repr(v) for v in r.values())]) + "\n")
    return out.getvalue()


def write_series_csv(records: Iterable[HourlyRecord], path: PathLike) -> None:
    atomic_write(path, format_series_csv(records))


# ------------------------------------------------------------------- model files

@dataclass(frozen=True)
class ModelFile:
    schema: Tuple[str, ...]
    intercept: float
    coefficients: Tuple[float, ...]
    trained_at: str
    training_rows: int
    metrics: dict = field(default_factory=lambda: dict.fromkeys(METRIC_KEYS))
    format_version: int = MODEL_FORMAT_VERSION

    @property
    def coefficient_vector(self) -> CoefficientVector:
        return CoefficientVector(self.intercept, tuple(self.coefficients))

    @property
    def model_id(self) -> str:
        """Short content hash; identical models share an id."""
        return hashlib.sha256(dump_model(self).encode("utf-8")).hexdigest()[:12]


def _num(x: Optional[float]) -> str:
    if x is None:
        return "null"
    x = float(x)
    if not math.isfinite(x):
        raise MalformedFileError(f"cannot serialise non-finite value {x}")
    return format(x, ".17g")


def check_model_shape(model: ModelFile) -> None:
    if model.format_version != MODEL_FORMAT_VERSION:
        raise VersionMismatchError(
            f"model format_version {model.format_version} is not supported (expected {MODEL_FORMAT_VERSION})"
        )
    schema = tuple(model.schema)
    if len(schema) != N_FEATURES or len(set(schema)) != len(schema):
        raise SchemaMismatchError(f"schema must list {N_FEATURES} unique feature names, got {len(schema)}")
    if len(model.coefficients) != len(schema):
        raise SchemaMismatchError(
            f"{len(model.coefficients)} coefficients for a {len(schema)}-feature schema"
        )


def dump_model(model: ModelFile) -> str:
    """JSON text; every real is printed with 17 significant digits."""
    check_model_shape(model)
    metrics = ", ".join(f"{json.dumps(k)}: {_num(model.metrics.get(k))}" for k in METRIC_KEYS)
    lines = [
        "{",
        f'  "format_version": {int(model.format_version)},',
        f'  "schema": {json.dumps(list(model.schema))},',
        f'  "intercept": {_num(model.intercept)},',
        f'  "coefficients": [{", ".join(_num(c) for c in model.coefficients)}],',
        f'  "trained_at": {json.dumps(model.trained_at)},',
        f'  "training_rows": {int(model.training_rows)},',
        f'  "metrics": {{{metrics}}}',
        "}",
    ]
    return "\n".join(lines) + "\n"


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def load_model(text: str) -> ModelFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFileError(f"model file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedFileError("model file must hold a JSON object")

    if "format_version" in doc and doc["format_version"] != MODEL_FORMAT_VERSION:
        raise VersionMismatchError(
            f"model format_version {doc['format_version']!r} is not supported (expected {MODEL_FORMAT_VERSION})"
        )
    unknown = sorted(set(doc) - set(MODEL_KEYS))
    missing = [k for k in MODEL_KEYS if k not in doc]
    if unknown:
        raise MalformedFileError(f"unknown field(s) in model file: {', '.join(unknown)}")
    if missing:
        raise MalformedFileError(f"missing field(s) in model file: {', '.join(missing)}")

    schema, coefs, metrics = doc["schema"], doc["coefficients"], doc["metrics"]
    if not (isinstance(schema, list) and all(isinstance(s, str) for s in schema)):
        raise MalformedFileError("schema must be a list of strings")
    if not (isinstance(coefs, list) and all(_is_real(c) for c in coefs)):
        raise MalformedFileError("coefficients must be a list of numbers")
    if not _is_real(doc["intercept"]):
        raise MalformedFileError("intercept must be a number")
    if not isinstance(doc["trained_at"], str):
        raise MalformedFileError("trained_at must be a string")
    if not isinstance(doc["training_rows"], int) or isinstance(doc["training_rows"], bool):
        raise MalformedFileError("training_rows must be an integer")
    if not isinstance(metrics, dict) or set(metrics) != set(METRIC_KEYS):
        raise MalformedFileError(f"metrics must hold exactly {', '.join(METRIC_KEYS)}")
    if not all(v is None or _is_real(v) for v in metrics.values()):
        raise MalformedFileError("metric values must be numbers or null")

    model = ModelFile(
        schema=tuple(schema),
        intercept=float(doc["intercept"]),
        coefficients=tuple(float(c) for c in coefs),
        trained_at=doc["trained_at"],
        training_rows=doc["training_rows"],
        metrics={k: None if metrics[k] is None else float(metrics[k]) for k in METRIC_KEYS},
        format_version=doc["format_version"],
    )
    check_model_shape(model)
    return model


def write_model(model: ModelFile, path: PathLike) -> None:
    atomic_write(path, dump_model(model))


def read_model(source: Union[PathLike, IO[str]]) -> ModelFile:
    text, _ = _read_text(source)
    return load_model(text)


# ----------------------------------------------------------------- text export

def format_training_text(pairs: Sequence[TrainingPair]) -> str:
    """One line per pair: 12 features then the target, 4 decimals, space separated."""
    if not pairs:
        raise EmptyInputError("no training pairs to export")
    return "".join(
        " ".join(f"{v:.4f}" for v in (*p.features, p.target)) + "\n" for p in pairs
    )


def export_training_text(pairs: Sequence[TrainingPair], path: PathLike) -> None:
    atomic_write(path, format_training_text(pairs))
