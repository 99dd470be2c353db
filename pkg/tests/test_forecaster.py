from datetime import timedelta
from fractions import Fraction

import numpy as np
import pytest

from oracles import normal_equations_fit, table2_mape_exact
from stlf.dataset_io import ModelFile, format_series_csv
from stlf.errors import InsufficientDataError, RankDeficientError, SchemaMismatchError, SeriesTooShortError
from stlf.features import FEATURE_SCHEMA, HourlyRecord, build_windows, window_vector
from stlf.fixtures import load_fixture
from stlf.forecaster import (
    evaluate_pairs,
    fit_series,
    forecast_next,
    holdout,
    rolling_metrics,
    rolling_refit,
    validate_holdout,
)
from stlf.regression import CoefficientVector, fit_simple, predict
from stlf.synthetic import REFERENCE_LAW, generate_series, law_prediction

from conftest import DATA_DIR


def zero_model(intercept, schema=FEATURE_SCHEMA):
    return ModelFile(
        schema=tuple(schema),
        intercept=intercept,
        coefficients=(0.0,) * len(schema),
        trained_at="2009-06-01T00:00:00Z",
        training_rows=99,
    )


SPARSE_LAW = CoefficientVector(5.0, (0.8, 0, 0, 0.1, 0, 0, 0, 0, 0, 0, 0, 0))


# ------------------------------------------------------------------ fit_series

def test_recover_sparse_law():
    series = generate_series(150, SPARSE_LAW, seed=4)
    rep = fit_series(series)
    np.testing.assert_allclose(rep.coefficients.as_array(), SPARSE_LAW.as_array(), atol=1e-8)
    assert rep.n_pairs == 147
    assert rep.model.schema == FEATURE_SCHEMA
    assert rep.model.training_rows == 147


def test_recover_matches_normal_equations(clean_series):
    pairs = build_windows(clean_series)
    rep = fit_series(clean_series)
    want = normal_equations_fit([p.features for p in pairs], [p.target for p in pairs])
    np.testing.assert_allclose(rep.coefficients.as_array(), want, rtol=1e-6, atol=1e-6)


def test_fit_needs_13_pairs():
    with pytest.raises(InsufficientDataError):
        fit_series(generate_series(15))


def test_constant_series_is_rank_deficient():
    s = generate_series(40)
    const = [HourlyRecord(r.timestamp, 26.0, 41.0, 27.0, 72.0) for r in s]
    with pytest.raises(RankDeficientError):
        fit_series(const)


def test_fit_is_deterministic(clean_series):
    assert fit_series(clean_series) == fit_series(clean_series)


def test_trained_at_is_last_target_hour(clean_series):
    rep = fit_series(clean_series)
    assert rep.model.trained_at == clean_series[-1].timestamp.strftime("%Y-%m-%dT%H:%M:%SZ")


def test_more_regressors_never_lower_in_sample_r2():
    series = generate_series(200, noise=0.7, seed=8)
    pairs = build_windows(series)
    full = fit_series(series).metrics.r_squared
    y = np.array([p.target for p in pairs])
    for j in range(12):
        x = np.array([p.features[j] for p in pairs])
        b = fit_simple(x, y)
        pred = b.intercept + b.coefficients[0] * x
        r2 = 1 - np.sum((pred - y) ** 2) / np.sum((y - y.mean()) ** 2)
        assert full >= r2 - 1e-12


# ------------------------------------------------------------------ forecast_next

def test_zero_coefficient_model_echoes_intercept(clean_series):
    fc = forecast_next(zero_model(26.8942), clean_series)
    assert fc.predicted_load == 26.8942
    assert fc.target_hour == clean_series[-1].timestamp + timedelta(hours=1)


def test_forecast_matches_generating_law():
    series = generate_series(160, seed=21)
    model = fit_series(series[:-1]).model
    fc = forecast_next(model, series[:-1])
    assert fc.predicted_load == pytest.approx(law_prediction(REFERENCE_LAW, series[:-1]), abs=1e-6)
    assert fc.predicted_load == pytest.approx(series[-1].load, abs=1e-6)


def test_forecast_is_the_dot_product(clean_series):
    model = fit_series(clean_series).model
    fc = forecast_next(model, clean_series)
    assert fc.predicted_load == predict(model.coefficient_vector, window_vector(clean_series[-3:]))
    assert fc.model_id == model.model_id


def test_schema_mismatch(clean_series):
    with pytest.raises(SchemaMismatchError):
        forecast_next(zero_model(1.0, FEATURE_SCHEMA[:11]), clean_series)
    with pytest.raises(SchemaMismatchError):
        forecast_next(zero_model(1.0, FEATURE_SCHEMA[::-1]), clean_series)


def test_forecast_needs_three_records(clean_series):
    with pytest.raises(SeriesTooShortError):
        forecast_next(zero_model(1.0), clean_series[:2])


# ------------------------------------------------------------------ hold-out

def test_holdout_noiseless_is_exact(clean_series):
    m = validate_holdout(clean_series, 0.7)
    assert m.mape_percent == pytest.approx(0.0, abs=1e-9)
    assert m.r_squared == pytest.approx(1.0, abs=1e-9)


def test_holdout_split_is_time_ordered(clean_series):
    ev = holdout(clean_series, 0.75)
    pairs = build_windows(clean_series)
    n_train = int(0.75 * len(pairs))
    assert ev.train.n_pairs == n_train
    assert list(ev.test_pairs) == pairs[n_train:]
    last_train_target = pairs[n_train - 1].target_timestamp
    assert all(p.target_timestamp > last_train_target for p in ev.test_pairs)


def test_holdout_zero_test_pairs(clean_series):
    with pytest.raises(InsufficientDataError):
        validate_holdout(clean_series, 1.0)


def test_holdout_too_few_training_pairs(clean_series):
    with pytest.raises(InsufficientDataError):
        validate_holdout(clean_series, 0.05)


def test_holdout_bad_fraction(clean_series):
    with pytest.raises(ValueError):
        validate_holdout(clean_series, 0.0)


def test_table2_mape_matches_hand_arithmetic():
    pairs = load_fixture("table2_actual_predicted")["pairs"]
    m = evaluate_pairs([a for a, _ in pairs], [p for _, p in pairs])
    assert m.mape_percent == pytest.approx(float(table2_mape_exact()), abs=1e-9)
    assert table2_mape_exact() == Fraction(3436267, 508950)
    assert m.mape_percent > 5.0
    assert m.max_abs_deviation == pytest.approx(3.01, abs=1e-12)


# ------------------------------------------------------------------ rolling refit

def test_rolling_matches_per_window_refit():
    series = generate_series(140, noise=0.3, seed=5)
    W = 40
    steps = rolling_refit(series, W)
    assert len(steps) == len(build_windows(series)) - W
    for k, step in enumerate(steps):
        ref = fit_series(series[k: k + W + 3])
        np.testing.assert_allclose(step.coefficients.as_array(), ref.coefficients.as_array(), rtol=0, atol=1e-10)
        assert step.actual == series[k + W + 3].load
        assert step.error == step.forecast.predicted_load - step.actual


def test_rolling_single_step_equals_fit_and_forecast():
    series = generate_series(60, noise=0.3, seed=6)
    pairs = build_windows(series)
    steps = rolling_refit(series, len(pairs) - 1)
    assert len(steps) == 1
    rep = fit_series(series[:-1])
    fc = forecast_next(rep.model, series[:-1])
    assert steps[0].forecast == fc
    assert steps[0].coefficients == rep.coefficients
    assert steps[0].actual == series[-1].load


def test_rolling_parallel_identical():
    series = generate_series(130, noise=0.3, seed=7)
    assert rolling_refit(series, 30, max_workers=4) == rolling_refit(series, 30)


def test_rolling_errors():
    series = generate_series(40)
    with pytest.raises(InsufficientDataError):
        rolling_refit(series, 12)
    with pytest.raises(InsufficientDataError):
        rolling_refit(series, 37)


def test_rolling_adapts_after_regime_change():
    after = CoefficientVector(
        9.0, (0.3, 0.1, 0.05, 0.12, 0.02, 0.01, -0.05, 0.03, 0.0, 0.02, -0.01, 0.01)
    )
    switch = 200
    series = generate_series(400, noise=0.05, seed=12, switch_at=switch, law_after=after)
    W = 60
    steps = rolling_refit(series, W)
    fixed = fit_series(series[: W + 3]).coefficients
    pairs = build_windows(series)

    def errors_from(hour_index):
        rolling, frozen = [], []
        for k, step in enumerate(steps):
            pair = pairs[k + W]
            if (pair.target_timestamp - series[0].timestamp) // timedelta(hours=1) >= hour_index:
                rolling.append(abs(step.error))
                frozen.append(abs(predict(fixed, pair.features) - pair.target))
        return np.mean(rolling), np.mean(frozen)

    roll, frozen = errors_from(switch + W + 10)
    assert roll < frozen
    assert roll < 0.2 * frozen


def test_rolling_metrics():
    series = generate_series(80, seed=9)
    m = rolling_metrics(rolling_refit(series, 20))
    assert m.mape_percent == pytest.approx(0.0, abs=1e-9)


# ------------------------------------------------------------------ bundled sample data

def test_sample_series_is_reproducible():
    regenerated = format_series_csv(generate_series(240, noise=0.5, seed=2009))
    assert (DATA_DIR / "sample_series.csv").read_text() == regenerated
