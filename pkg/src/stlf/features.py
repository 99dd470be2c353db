"""Hourly records and the 12-parameter lag window.

A training pair anchored at hour ``t`` holds load, temperature, wind and cloud
for hours ``t``, ``t-1`` and ``t-2`` (current value first) and targets the load
at ``t+1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import List, Sequence, Tuple

from .errors import (
    NonConsecutiveTimestampsError,
    RangeViolationError,
    SeriesTooShortError,
    UnsortedSeriesError,
)

HOUR = timedelta(hours=1)
LAGS = 3
PARAMETERS = ("load", "temp", "wind", "cloud")

FEATURE_SCHEMA: Tuple[str, ...] = tuple(
    f"{name}(t)" if lag == 0 else f"{name}(t-{lag})"
    for name in PARAMETERS
    for lag in range(LAGS)
)
N_FEATURES = len(FEATURE_SCHEMA)


@dataclass(frozen=True)
class HourlyRecord:
    timestamp: datetime
    load: float
    temperature: float
    wind: float
    cloud: float

    def __post_init__(self):
        ts = self.timestamp
        if ts.tzinfo is None:
            ts = ts.replace(tzinfo=timezone.utc)
        else:
            ts = ts.astimezone(timezone.utc)
        if ts.minute or ts.second or ts.microsecond:
            raise RangeViolationError(f"timestamp {ts.isoformat()} is not on the hour")
        object.__setattr__(self, "timestamp", ts)

        for name in ("load", "temperature", "wind", "cloud"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise RangeViolationError(f"{name} is not finite", column=name)
            object.__setattr__(self, name, value)
        if self.load <= 0:
            raise RangeViolationError(f"load must be positive, got {self.load}", column="load")
        if self.wind < 0:
            raise RangeViolationError(f"wind must be non-negative, got {self.wind}", column="wind")
        if not 0.0 <= self.cloud <= 100.0:
            raise RangeViolationError(f"cloud must lie in [0, 100], got {self.cloud}", column="cloud")

    def values(self) -> Tuple[float, float, float, float]:
        return (self.load, self.temperature, self.wind, self.cloud)


@dataclass(frozen=True)
class TrainingPair:
    features: Tuple[float, ...]
    target: float
    anchor_timestamp: datetime

    @property
    def target_timestamp(self) -> datetime:
        return self.anchor_timestamp + HOUR


def check_hourly(series: Sequence[HourlyRecord]) -> None:
    """Raise unless each record is exactly one hour after the previous one."""
    for i in range(1, len(series)):
        prev, cur = series[i - 1].timestamp, series[i].timestamp
        if cur <= prev:
            raise UnsortedSeriesError(
                f"record {i} ({cur.isoformat()}) does not come after record {i - 1} ({prev.isoformat()})"
            )
        if cur - prev != HOUR:
            raise NonConsecutiveTimestampsError(
                f"gap between record {i - 1} ({prev.isoformat()}) and record {i} ({cur.isoformat()})"
            )


def window_vector(records: Sequence[HourlyRecord]) -> Tuple[float, ...]:
    """Schema-ordered 12-vector from three consecutive records, oldest first."""
    oldest, middle, newest = records
    cols = zip(newest.values(), middle.values(), oldest.values())
    return tuple(v for triple in cols for v in triple)


def build_windows(series: Sequence[HourlyRecord]) -> List[TrainingPair]:
    n = len(series)
    if n < LAGS + 1:
        raise SeriesTooShortError(f"need at least {LAGS + 1} hourly records, got {n}")
    check_hourly(series)
    return [
        TrainingPair(
            features=window_vector(series[t - 2: t + 1]),
            target=series[t + 1].load,
            anchor_timestamp=series[t].timestamp,
        )
        for t in range(LAGS - 1, n - 1)
    ]


def latest_feature_vector(series: Sequence[HourlyRecord]) -> Tuple[Tuple[float, ...], datetime]:
    """Features for forecasting the hour after the last record.

    Returns ``(vector, anchor)``; the forecast target hour is ``anchor + 1h``.
    """
    if len(series) < LAGS:
        raise SeriesTooShortError(f"need at least {LAGS} hourly records, got {len(series)}")
    check_hourly(series)
    tail = series[-LAGS:]
    return window_vector(tail), tail[-1].timestamp


def temperature_demand_points(series: Sequence[HourlyRecord]) -> Tuple[List[float], List[float]]:
    """``(temperature(t), load(t+1))`` for every consecutive pair of records."""
    if len(series) < 2:
        raise SeriesTooShortError(f"need at least 2 hourly records, got {len(series)}")
    check_hourly(series)
    temps = [r.temperature for r in series[:-1]]
    loads = [r.load for r in series[1:]]
    return temps, loads
