"""Synthetic hourly series driven by a known 12-coefficient law.

Weather columns are drawn independently per hour; load evolves through the
law itself, so a noiseless series lies exactly in the model class.
"""

from __future__ import annotations

from datetime import datetime, timezone
from typing import List, Optional, Sequence

import numpy as np

from .features import HOUR, HourlyRecord, window_vector
from .regression import CoefficientVector

DEFAULT_START = datetime(2009, 6, 1, 0, tzinfo=timezone.utc)

# Stable reference law; load lags sum to 0.8 so the load settles near 35 MW.
REFERENCE_LAW = CoefficientVector(
    2.0,
    (
        0.5, 0.2, 0.1,        # load(t), load(t-1), load(t-2)
        0.05, 0.03, 0.02,     # temp
        0.04, -0.02, 0.01,    # wind
        -0.03, 0.02, 0.01,    # cloud
    ),
)

# Value ranges of the table1_inputs fixture.
TEMP_RANGE = (40.0, 45.0)
WIND_RANGE = (25.0, 30.0)
CLOUD_RANGE = (70.0, 75.0)


def generate_series(
    n: int,
    law: CoefficientVector = REFERENCE_LAW,
    *,
    noise: float = 0.0,
    seed: int = 0,
    start: datetime = DEFAULT_START,
    initial_loads: Sequence[float] = (27.0, 26.0, 28.0),
    switch_at: Optional[int] = None,
    law_after: Optional[CoefficientVector] = None,
) -> List[HourlyRecord]:
    """Return ``n`` consecutive hourly records.

    Record ``t+1`` gets ``load = law(window(t-2..t)) + N(0, noise)`` for
    ``t >= 2``.  With ``switch_at`` and ``law_after`` the law changes for
    every target hour index ``>= switch_at``.
    """
    if n < 3:
        raise ValueError("need at least 3 records to seed the lag window")
    rng = np.random.default_rng(seed)
    temps = rng.uniform(*TEMP_RANGE, size=n)
    winds = rng.uniform(*WIND_RANGE, size=n)
    clouds = rng.uniform(*CLOUD_RANGE, size=n)
    shocks = rng.normal(0.0, noise, size=n) if noise > 0 else np.zeros(n)

    records: List[HourlyRecord] = []
    for i in range(n):
        if i < 3:
            load = float(initial_loads[i])
        else:
            active = law_after if (switch_at is not None and i >= switch_at) else law
            x = np.asarray(window_vector(records[i - 3: i]))
            load = float(active.intercept + np.dot(active.coefficients, x) + shocks[i])
        records.append(
            HourlyRecord(start + i * HOUR, load, float(temps[i]), float(winds[i]), float(clouds[i]))
        )
    return records


def law_prediction(law: CoefficientVector, records: Sequence[HourlyRecord]) -> float:
    """The law's next-hour load for the last three ``records``."""
    x = np.asarray(window_vector(records[-3:]))
    return float(law.intercept + np.dot(law.coefficients, x))

