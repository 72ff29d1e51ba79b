"""Forecasting model families: ETS with automatic selection, seasonal naive,
Holt-Winters and its double-seasonal variant."""

from .base import (
    DshwForecaster,
    EtsForecaster,
    ForecastResult,
    Forecaster,
    HoltWintersForecaster,
    SeasonalNaiveForecaster,
    forecaster_for,
)
from .dshw import DshwModel, fit_dshw, forecast_dshw
from .ets import (
    FittedModel,
    ModelSpec,
    ets_components,
    fit_ets,
    fit_ets_auto,
    forecast,
    one_step_residuals,
)
from .naive import seasonal_naive

__all__ = [
    "ModelSpec",
    "FittedModel",
    "fit_ets",
    "fit_ets_auto",
    "forecast",
    "ets_components",
    "one_step_residuals",
    "seasonal_naive",
    "DshwModel",
    "fit_dshw",
    "forecast_dshw",
    "Forecaster",
    "ForecastResult",
    "EtsForecaster",
    "SeasonalNaiveForecaster",
    "HoltWintersForecaster",
    "DshwForecaster",
    "forecaster_for",
]
