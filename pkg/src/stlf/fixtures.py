"""Reference tables embedded verbatim as read-only fixtures.

Payloads are read-only mappings of tuples.  Their SHA-256 checksums are pinned
in the test suite, so any edit here shows up as a test failure.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Mapping

from .errors import UnknownFixtureError

# Twelve rows as printed; each column is one input vector in feature-schema order
# (rows 1-3 load, 4-6 temperature, 7-9 wind, 10-12 cloud; current hour first).
_TABLE1_GRID = (
    (26.00, 26.00, 26.00, 30.00, 25.00, 25.00, 27.00, 27.00, 30.00, 27.00),
    (30.00, 28.00, 25.00, 26.00, 29.00, 25.00, 28.00, 29.00, 25.00, 30.00),
    (25.00, 26.00, 27.00, 26.00, 25.00, 30.00, 25.00, 25.00, 26.00, 27.00),
    (45.00, 40.00, 45.00, 43.00, 42.00, 43.00, 44.00, 42.00, 43.00, 44.00),
    (40.00, 40.00, 41.00, 44.00, 43.00, 42.00, 45.00, 44.00, 44.00, 44.00),
    (42.00, 41.00, 41.00, 40.00, 44.00, 41.00, 42.00, 43.00, 44.00, 45.00),
    (30.00, 26.00, 27.00, 27.00, 30.00, 30.00, 27.00, 30.00, 27.00, 28.00),
    (28.00, 29.00, 29.00, 28.00, 27.00, 29.00, 26.00, 29.00, 25.00, 28.00),
    (29.00, 28.00, 26.00, 26.00, 25.00, 28.00, 26.00, 28.00, 27.00, 28.00),
    (72.00, 74.00, 73.00, 73.00, 71.00, 74.00, 71.00, 72.00, 74.00, 74.00),
    (75.00, 72.00, 75.00, 70.00, 72.00, 74.00, 71.00, 72.00, 71.00, 73.00),
    (70.00, 72.00, 72.00, 73.00, 70.00, 74.00, 73.00, 73.00, 75.00, 73.00),
)

_RAW = {
    "section2_example": {
        "columns": ("x1", "x2", "y"),
        "rows": (
            (0.2, 0.1, 0.17),
            (0.5, 0.3, 0.26),
            (0.6, 0.4, 0.28),
            (0.8, 0.9, 0.23),
            (1.0, 1.1, 0.27),
            (1.1, 1.4, 0.24),
        ),
        "coefficients": (0.1018, 0.4844, -0.2847),
        "max_err": 0.0038,
    },
    "table1_inputs": {
        "grid": _TABLE1_GRID,
        "vectors": tuple(zip(*_TABLE1_GRID)),
    },
    "table2_actual_predicted": {
        "columns": ("actual_mw", "predicted_mw"),
        "pairs": (
            (26.00, 27.41),
            (25.00, 26.54),
            (30.00, 27.81),
            (27.00, 27.46),
            (25.00, 27.81),
            (30.00, 26.99),
            (29.00, 27.86),
            (30.00, 27.59),
            (26.00, 28.03),
            (26.00, 27.53),
        ),
        "claimed_mape_threshold_percent": 5.0,
    },
    "table3_forecast_input": {
        "features": (29.0, 25.0, 28.0, 43.0, 41.0, 42.0, 30.0, 27.0, 28.0, 71.0, 71.0, 75.0),
        "forecast_mw": 26.8942,
    },
}

FIXTURE_NAMES = tuple(sorted(_RAW))


@dataclass(frozen=True)
class Fixture:
    name: str
    payload: Mapping[str, Any]

    def canonical_json(self) -> str:
        return json.dumps(dict(self.payload), sort_keys=True, separators=(",", ":"))

    def checksum(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    def __getitem__(self, key: str) -> Any:
        return self.payload[key]


def load_fixture(name: str) -> Fixture:
    try:
        raw = _RAW[name]
    except KeyError:
        raise UnknownFixtureError(
            f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}"
        ) from None
    return Fixture(name, MappingProxyType(raw))
