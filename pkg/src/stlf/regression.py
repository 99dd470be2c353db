"""Ordinary least squares: design matrix, Householder QR solve, prediction, fit metrics.

The solver never forms ``X^T X``.  Columns are reduced with Householder
reflections and the triangular system ``R a = Q^T y`` is solved by back
substitution.  Rank is judged from the diagonal of ``R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    DegenerateXError,
    DimensionMismatchError,
    EmptyInputError,
    NonFiniteValueError,
    RaggedRowsError,
    RankDeficientError,
)

__all__ = [
    "DesignMatrix",
    "CoefficientVector",
    "FitMetrics",
    "build_design_matrix",
    "householder_qr",
    "fit_ols",
    "predict",
    "predict_many",
    "compute_metrics",
    "metrics_from_predictions",
    "fit_simple",
    "rank_threshold",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DesignMatrix:
    """An ``m x (p+1)`` regressor matrix whose first column is the intercept."""

    data: np.ndarray

    def __post_init__(self):
        a = np.array(self.data, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionMismatchError(f"design matrix must be 2-D and non-empty, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            bad = int(np.argwhere(~np.isfinite(a))[0, 0])
            raise NonFiniteValueError(f"non-finite value in design matrix row {bad}", row=bad)
        if not np.all(a[:, 0] == 1.0):
            raise DimensionMismatchError("column 0 of a design matrix must be all ones")
        object.__setattr__(self, "data", _frozen(a))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def features(self) -> np.ndarray:
        """The feature block, i.e. the matrix without its intercept column."""
        return self.data[:, 1:]


@dataclass(frozen=True)
class CoefficientVector:
    intercept: float
    coefficients: tuple

    def __post_init__(self):
        coefs = tuple(float(c) for c in self.coefficients)
        intercept = float(self.intercept)
        if not all(math.isfinite(c) for c in (intercept, *coefs)):
            raise NonFiniteValueError("coefficient vector contains a non-finite entry")
        object.__setattr__(self, "intercept", intercept)
        object.__setattr__(self, "coefficients", coefs)

    @property
    def p(self) -> int:
        return len(self.coefficients)

    def as_array(self) -> np.ndarray:
        """``[intercept, c_1, ..., c_p]`` as a fresh float array."""
        return np.array((self.intercept, *self.coefficients), dtype=float)

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "CoefficientVector":
        a = [float(v) for v in a]
        return cls(a[0], tuple(a[1:]))


@dataclass(frozen=True)
class FitMetrics:
    """Goodness of fit for a set of predictions.

    ``mape_percent`` is ``None`` when some observed value is zero and
    ``r_squared`` is ``None`` when the observations have no variance.
    Residuals are ``predicted - observed``.
    """

    max_abs_deviation: float
    mape_percent: Optional[float]
    r_squared: Optional[float]
    residuals: tuple = field(repr=False)

    @property
    def mape_defined(self) -> bool:
        return self.mape_percent is not None

    @property
    def r_squared_defined(self) -> bool:
        return self.r_squared is not None

    @property
    def n(self) -> int:
        return len(self.residuals)

    def summary(self) -> dict:
        return {
            "max_abs_deviation": self.max_abs_deviation,
            "mape_percent": self.mape_percent,
            "r_squared": self.r_squared,
        }


FeatureRows = Union[Sequence[Sequence[float]], np.ndarray]


def build_design_matrix(feature_rows: FeatureRows) -> DesignMatrix:
    """Prepend an intercept column of ones to ``feature_rows``.

    >>> build_design_matrix([(7.0,)]).data.tolist()
    [[1.0, 7.0]]
    """
    rows = list(feature_rows)
    if not rows:
        raise EmptyInputError("no feature rows given")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise RaggedRowsError(f"feature rows have unequal lengths {sorted(widths)}")
    p = widths.pop()
    if p < 1:
        raise DimensionMismatchError("feature rows must have at least one value")
    feats = np.asarray(rows, dtype=float)
    finite = np.isfinite(feats).all(axis=1)
    if not finite.all():
        bad = int(np.flatnonzero(~finite)[0])
        raise NonFiniteValueError(f"non-finite feature value in row {bad}", row=bad)
    return DesignMatrix(np.column_stack([np.ones(len(rows)), feats]))


def householder_qr(a: np.ndarray):
    """Householder QR of an ``m x n`` matrix.

    Returns ``(reflectors, r)``.  ``reflectors[k]`` is the unit vector ``v``
    of ``H_k = I - 2 v v^T`` acting on rows ``k:``, or ``None`` when column
    ``k`` was already zero below the diagonal.  ``r`` is ``min(m, n) x n``
    upper triangular with ``Q^T a = r`` in its leading rows.
    """
    r = np.array(a, dtype=float, copy=True)
    m, n = r.shape
    reflectors = []
    for k in range(min(m, n)):
        x = r[k:, k]
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            reflectors.append(None)
            continue
        alpha = -math.copysign(norm_x, x[0])
        v = x.copy()
        v[0] -= alpha
        norm_v = np.linalg.norm(v)
        if norm_v == 0.0:
            reflectors.append(None)
            continue
        v /= norm_v
        r[k:, k:] -= 2.0 * np.outer(v, v @ r[k:, k:])
        r[k, k] = alpha
        r[k + 1:, k] = 0.0
        reflectors.append(v)
    return reflectors, np.triu(r[: min(m, n)])


def _apply_qt(reflectors, y: np.ndarray) -> np.ndarray:
    z = np.array(y, dtype=float, copy=True)
    for k, v in enumerate(reflectors):
        if v is not None:
            z[k:] -= 2.0 * v * (v @ z[k:])
    return z


def _back_substitute(r: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = r.shape[1]
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - r[i, i + 1:] @ x[i + 1:]) / r[i, i]
    return x


def rank_threshold(diag: np.ndarray, m: int, n: int) -> float:
    """``eps * max(m, n) * max|R_ii|``; diagonal entries at or below it count as zero."""
    return float(np.finfo(float).eps * max(m, n) * np.max(np.abs(diag), initial=0.0))


def fit_ols(X: DesignMatrix, y: Sequence[float]) -> CoefficientVector:
    """Least-squares coefficients minimising ``||X a - y||^2``.

    Raises :class:`RankDeficientError` rather than picking one of many
    minimisers, so a returned model is always the unique solution.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.shape[0] != X.rows:
        raise DimensionMismatchError(f"y has {y.size} values but X has {X.rows} rows")
    if not np.all(np.isfinite(y)):
        bad = int(np.flatnonzero(~np.isfinite(y))[0])
        raise NonFiniteValueError(f"non-finite target in row {bad}", row=bad)

    m, n = X.data.shape
    reflectors, r = householder_qr(X.data)
    diag = np.abs(np.diag(r))
    tol = rank_threshold(diag, m, n)
    rank = int(np.count_nonzero(diag > tol))
    if m < n or rank < n:
        raise RankDeficientError(rank, tol, n)

    qty = _apply_qt(reflectors, y)
    return CoefficientVector.from_array(_back_substitute(r[:n, :n], qty[:n]))


def predict(model: CoefficientVector, features: Sequence[float]) -> float:
    x = np.asarray(features, dtype=float)
    if x.ndim != 1 or x.shape[0] != model.p:
        raise DimensionMismatchError(f"model expects {model.p} features, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteValueError("non-finite feature value")
    return float(model.intercept + np.dot(np.asarray(model.coefficients), x))


def predict_many(model: CoefficientVector, feature_rows: FeatureRows) -> np.ndarray:
    if isinstance(feature_rows, DesignMatrix):
        feats = feature_rows.features
    else:
        feats = np.asarray(feature_rows, dtype=float)
    if feats.ndim != 2 or feats.shape[1] != model.p:
        raise DimensionMismatchError(f"model expects {model.p} features per row, got shape {feats.shape}")
    return model.intercept + feats @ np.asarray(model.coefficients)


def metrics_from_predictions(predicted: Sequence[float], observed: Sequence[float]) -> FitMetrics:
    pred = np.asarray(predicted, dtype=float)
    obs = np.asarray(observed, dtype=float)
    if pred.shape != obs.shape or pred.ndim != 1:
        raise DimensionMismatchError(f"{pred.size} predictions vs {obs.size} observations")
    if obs.size == 0:
        raise EmptyInputError("no observations to score")
    if not (np.all(np.isfinite(pred)) and np.all(np.isfinite(obs))):
        raise NonFiniteValueError("non-finite prediction or observation")

    residuals = pred - obs
    abs_res = np.abs(residuals)

    mape = None
    if np.all(obs != 0.0):
        mape = float(100.0 / obs.size * np.sum(abs_res / np.abs(obs)))

    r2 = None
    if not np.all(obs == obs[0]):
        ss_tot = float(np.sum((obs - obs.mean()) ** 2))
        ss_res = float(np.sum(residuals ** 2))
        r2 = 1.0 - ss_res / ss_tot

    return FitMetrics(
        max_abs_deviation=float(abs_res.max()),
        mape_percent=mape,
        r_squared=r2,
        residuals=tuple(residuals.tolist()),
    )


def compute_metrics(model: CoefficientVector, feature_rows: FeatureRows, y: Sequence[float]) -> FitMetrics:
    """Score ``model`` on ``feature_rows`` (or a :class:`DesignMatrix`) against ``y``."""
    y = np.asarray(y, dtype=float)
    pred = predict_many(model, feature_rows)
    if pred.shape[0] != y.shape[0]:
        raise DimensionMismatchError(f"{pred.shape[0]} feature rows vs {y.shape[0]} targets")
    return metrics_from_predictions(pred, y)


def fit_simple(x: Sequence[float], y: Sequence[float]) -> CoefficientVector:
    """Straight-line fit ``y = b1 + b2 x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DimensionMismatchError(f"x has {x.size} values, y has {y.size}")
    if x.size < 2:
        raise DimensionMismatchError("a line needs at least two points")
    if np.all(x == x[0]):
        raise DegenerateXError("x has zero variance; the slope is undetermined")
    return fit_ols(build_design_matrix(x[:, None]), y)
