"""Seasonal naive benchmark: repeat the last observed value of each season."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.stats import norm

from ..series import ForecastBundle

__all__ = ["seasonal_naive"]


def seasonal_naive(train: Sequence[float], period: int, h: int,
                   level: float = 0.95) -> ForecastBundle:
    """Forecast step t with the last observation of the same season.

    Interval widths use the in-sample seasonal-naive residual variance with
    Gaussian quantiles scaled by sqrt(ceil(t / period)).
    """
    y = np.asarray(train, dtype=np.float64)
    n = y.shape[0]
    if period < 1:
        raise ValueError(f"period must be >= 1, got {period}")
    if n < period:
        raise ValueError(f"insufficient data: need at least {period} observations, got {n}")
    if h < 1:
        raise ValueError(f"horizon must be >= 1, got {h}")

    points = np.array([y[n - period + (t - 1) % period] for t in range(1, h + 1)])
    if n > period:
        resid = y[period:] - y[:-period]
        sigma = math.sqrt(float(np.mean(resid**2)))
    else:
        sigma = 0.0
    z = norm.ppf(0.5 + level / 2.0)
    scale = np.array([math.sqrt(math.ceil(t / period)) for t in range(1, h + 1)])
    half = z * sigma * scale
    return ForecastBundle(
        points=points,
        lower=points - half,
        upper=points + half,
        level=level,
        model_label=f"snaive p={period}",
    )
