"""Short-term load forecasting by 12-parameter multiple linear regression."""

__version__ = "0.1.0"

from .dataset_io import (
    ModelFile,
    export_training_text,
    read_model,
    read_series_csv,
    write_model,
    write_series_csv,
)
from .errors import STLFError
from .features import (
    FEATURE_SCHEMA,
    HourlyRecord,
    TrainingPair,
    build_windows,
    latest_feature_vector,
)
from .fixtures import load_fixture
from .forecaster import (
    FitReport,
    Forecast,
    evaluate_pairs,
    fit_series,
    forecast_next,
    rolling_refit,
    validate_holdout,
)
from .regression import (
    CoefficientVector,
    DesignMatrix,
    FitMetrics,
    build_design_matrix,
    compute_metrics,
    fit_ols,
    fit_simple,
    predict,
)
