"""Forecaster interface used by the experiment harness.

Any callable with this signature can drive the subsampling pipeline, which
is how other model families (e.g. ARIMA) would plug in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np

from ..series import ForecastBundle
from .dshw import fit_dshw, forecast_dshw
from .ets import ModelSpec, ets_components, fit_ets, fit_ets_auto, forecast
from .naive import seasonal_naive

__all__ = ["ForecastResult", "Forecaster", "EtsForecaster",
           "SeasonalNaiveForecaster", "forecaster_for"]


@dataclass(frozen=True)
class ForecastResult:
    """A forecast bundle plus the fitted components when the family exposes them."""

    bundle: ForecastBundle
    has_trend: Optional[bool] = None
    has_seasonal: Optional[bool] = None


class Forecaster(Protocol):
    def __call__(self, train: np.ndarray, period: int, horizon: int, *,
                 level: float, paths: int, seed: int) -> ForecastResult:
        ...


class EtsForecaster:
    """Automatic exponential-smoothing selection per (sub)series."""

    def __call__(self, train: np.ndarray, period: int, horizon: int, *,
                 level: float, paths: int, seed: int) -> ForecastResult:
        model = fit_ets_auto(train, period)
        bundle = forecast(model, horizon, level=level, paths=paths, seed=seed)
        trend, seasonal = ets_components(model)
        return ForecastResult(bundle=bundle, has_trend=trend, has_seasonal=seasonal)


class SeasonalNaiveForecaster:
    def __call__(self, train: np.ndarray, period: int, horizon: int, *,
                 level: float, paths: int, seed: int) -> ForecastResult:
        return ForecastResult(bundle=seasonal_naive(train, period, horizon, level=level))


class HoltWintersForecaster:
    """Fixed-form trend plus multiplicative-seasonal smoothing (load levels of width 1)."""

    def __call__(self, train: np.ndarray, period: int, horizon: int, *,
                 level: float, paths: int, seed: int) -> ForecastResult:
        spec = ModelSpec(trend="additive", seasonal="multiplicative", period=period)
        model = fit_ets(train, spec)
        bundle = forecast(model, horizon, level=level, paths=paths, seed=seed)
        return ForecastResult(bundle=bundle, has_trend=True, has_seasonal=True)


class DshwForecaster:
    """Double-seasonal smoothing; ``period`` is the short cycle, the long one is 7x."""

    def __init__(self, use_ar: bool = False):
        self.use_ar = use_ar

    def __call__(self, train: np.ndarray, period: int, horizon: int, *,
                 level: float, paths: int, seed: int) -> ForecastResult:
        model = fit_dshw(train, (period, 7 * period), use_ar=self.use_ar)
        bundle = forecast_dshw(model, horizon, level=level, paths=paths, seed=seed)
        return ForecastResult(bundle=bundle, has_trend=True, has_seasonal=True)


_FAMILIES = {
    "ets": EtsForecaster,
    "snaive": SeasonalNaiveForecaster,
}


def forecaster_for(name: str) -> Forecaster:
    try:
        return _FAMILIES[name]()
    except KeyError:
        raise ValueError(f"unknown model family {name!r}; expected one of {sorted(_FAMILIES)}")
