"""Forecasting seasonal time series by subsampling sub-seasonal series.

The library cuts a seasonal series into every contiguous block of adjacent
seasons, forecasts each block as a lower-frequency series, and pools the
aligned forecasts (points and interval bounds) with equal weights. A CLI
harness evaluates the pooled method against the standard single-series fit
with MASE/AMSE/MSIS and Diebold-Mariano tests, including a rolling-origin
protocol for double-seasonal load data.
"""

__version__ = "0.1.0"

from .combine import MODE_LEVEL_EQUAL, MODE_POOLED, CombinedForecast, combine, combine_levels_report
from .metrics import (
    DmResult,
    HorizonBucket,
    MetricInput,
    amse,
    dm_test,
    horizon_buckets,
    mase,
    msis,
    scaled_denominator,
)
from .series import (
    ForecastBundle,
    MultiSeasonalSeries,
    SeasonalSeries,
    season_of,
    validate_series,
)
from .subsample import (
    AlignedSubseries,
    EmptySubseriesError,
    LoadLevelWindow,
    SeasonWindow,
    SubseriesPlan,
    count_subseries,
    enumerate_load_plan,
    enumerate_plan,
    extract,
)

__all__ = [
    "__version__",
    "SeasonalSeries",
    "MultiSeasonalSeries",
    "ForecastBundle",
    "season_of",
    "validate_series",
    "SeasonWindow",
    "SubseriesPlan",
    "AlignedSubseries",
    "LoadLevelWindow",
    "EmptySubseriesError",
    "count_subseries",
    "enumerate_plan",
    "extract",
    "enumerate_load_plan",
    "CombinedForecast",
    "combine",
    "combine_levels_report",
    "MODE_POOLED",
    "MODE_LEVEL_EQUAL",
    "MetricInput",
    "DmResult",
    "HorizonBucket",
    "scaled_denominator",
    "mase",
    "amse",
    "msis",
    "dm_test",
    "horizon_buckets",
]
