"""Fit, forecast, hold-out validation and rolling (adaptive) refit over hourly series."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from typing import List, Optional, Sequence

import numpy as np

from .dataset_io import ModelFile, format_timestamp
from .errors import InsufficientDataError, SchemaMismatchError
from .features import (
    FEATURE_SCHEMA,
    HOUR,
    N_FEATURES,
    HourlyRecord,
    TrainingPair,
    build_windows,
    latest_feature_vector,
)
from .regression import (
    CoefficientVector,
    FitMetrics,
    build_design_matrix,
    compute_metrics,
    fit_ols,
    metrics_from_predictions,
    predict,
    predict_many,
)

MIN_TRAINING_PAIRS = N_FEATURES + 1
DEFAULT_WINDOW = 99
DEFAULT_SPLIT = 0.8


@dataclass(frozen=True)
class FitReport:
    model: ModelFile
    metrics: FitMetrics
    n_pairs: int

    @property
    def coefficients(self) -> CoefficientVector:
        return self.model.coefficient_vector


@dataclass(frozen=True)
class Forecast:
    target_hour: datetime
    predicted_load: float
    model_id: str


@dataclass(frozen=True)
class HoldoutEvaluation:
    train: FitReport
    test_pairs: tuple
    predictions: tuple
    metrics: FitMetrics


@dataclass(frozen=True)
class RollingStep:
    forecast: Forecast
    actual: float
    error: float
    coefficients: CoefficientVector


def fit_pairs(pairs: Sequence[TrainingPair]) -> FitReport:
    if len(pairs) < MIN_TRAINING_PAIRS:
        raise InsufficientDataError(
            f"{len(pairs)} training pairs; at least {MIN_TRAINING_PAIRS} are needed for "
            f"{N_FEATURES} features plus an intercept"
        )
    X = build_design_matrix([p.features for p in pairs])
    y = [p.target for p in pairs]
    coef = fit_ols(X, y)
    metrics = compute_metrics(coef, X, y)
    model = ModelFile(
        schema=FEATURE_SCHEMA,
        intercept=coef.intercept,
        coefficients=coef.coefficients,
        # data-derived, so refitting the same file yields a byte-identical model
        trained_at=format_timestamp(pairs[-1].target_timestamp),
        training_rows=len(pairs),
        metrics=metrics.summary(),
    )
    return FitReport(model=model, metrics=metrics, n_pairs=len(pairs))


def fit_series(series: Sequence[HourlyRecord]) -> FitReport:
    """Build the lag windows of ``series`` and fit the 12-feature model in-sample."""
    return fit_pairs(build_windows(series))


def check_schema(model: ModelFile) -> None:
    if tuple(model.schema) != FEATURE_SCHEMA:
        raise SchemaMismatchError(
            f"model schema {list(model.schema)} does not match the pipeline schema {list(FEATURE_SCHEMA)}"
        )
    if len(model.coefficients) != N_FEATURES:
        raise SchemaMismatchError(f"model has {len(model.coefficients)} coefficients, expected {N_FEATURES}")


def forecast_next(model: ModelFile, series: Sequence[HourlyRecord]) -> Forecast:
    check_schema(model)
    features, anchor = latest_feature_vector(series)
    return Forecast(
        target_hour=anchor + HOUR,
        predicted_load=predict(model.coefficient_vector, features),
        model_id=model.model_id,
    )


def holdout(series: Sequence[HourlyRecord], split_fraction: float = DEFAULT_SPLIT) -> HoldoutEvaluation:
    """Time-ordered split: train on the first ``floor(fraction * pairs)`` pairs, score the rest.

    Every test pair's target comes after every training target, so no
    training row ever sees a test-span load as its target.
    """
    if not 0.0 < split_fraction <= 1.0:
        raise ValueError(f"split fraction must lie in (0, 1], got {split_fraction}")
    pairs = build_windows(series)
    n_train = math.floor(split_fraction * len(pairs))
    train, test = pairs[:n_train], pairs[n_train:]
    if not test:
        raise InsufficientDataError(f"split {split_fraction} of {len(pairs)} pairs leaves no test pairs")
    if len(train) < MIN_TRAINING_PAIRS:
        raise InsufficientDataError(
            f"split {split_fraction} leaves {len(train)} training pairs; need {MIN_TRAINING_PAIRS}"
        )
    report = fit_pairs(train)
    pred = predict_many(report.coefficients, [p.features for p in test])
    metrics = metrics_from_predictions(pred, [p.target for p in test])
    return HoldoutEvaluation(report, tuple(test), tuple(pred.tolist()), metrics)


def validate_holdout(series: Sequence[HourlyRecord], split_fraction: float = DEFAULT_SPLIT) -> FitMetrics:
    return holdout(series, split_fraction).metrics


def evaluate_pairs(actual: Sequence[float], predicted: Sequence[float]) -> FitMetrics:
    """Score an externally produced (actual, predicted) table."""
    return metrics_from_predictions(predicted, actual)


def rolling_refit(
    series: Sequence[HourlyRecord],
    window_size: int = DEFAULT_WINDOW,
    max_workers: Optional[int] = None,
) -> List[RollingStep]:
    """Refit on the most recent ``window_size`` pairs before every forecast.

    Step ``k`` trains on pairs ``[k, k + W)`` and forecasts the target of pair
    ``k + W``.  Windows are independent, so ``max_workers > 1`` evaluates them
    on a thread pool with results identical to the sequential run.
    """
    if window_size < MIN_TRAINING_PAIRS:
        raise InsufficientDataError(f"window of {window_size} pairs is below the minimum {MIN_TRAINING_PAIRS}")
    pairs = build_windows(series)
    n_steps = len(pairs) - window_size
    if n_steps < 1:
        raise InsufficientDataError(
            f"{len(pairs)} pairs leave no step after a {window_size}-pair window"
        )

    def step(k: int) -> RollingStep:
        report = fit_pairs(pairs[k: k + window_size])
        nxt = pairs[k + window_size]
        value = predict(report.coefficients, nxt.features)
        return RollingStep(
            forecast=Forecast(nxt.target_timestamp, value, report.model.model_id),
            actual=nxt.target,
            error=value - nxt.target,
            coefficients=report.coefficients,
        )

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(step, range(n_steps)))
    return [step(k) for k in range(n_steps)]


def rolling_metrics(steps: Sequence[RollingStep]) -> FitMetrics:
    return metrics_from_predictions(
        np.array([s.forecast.predicted_load for s in steps]),
        np.array([s.actual for s in steps]),
    )
