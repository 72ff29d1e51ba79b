"""Multiplicative Holt-Winters with two nested seasonal cycles.

Level and trend are smoothed against the product of a short-cycle index
(e.g. hour within day) and a long-cycle index (e.g. hour within week), with
an optional AR(1) adjustment on the one-step residuals. Initial indices come
from averaged first cycles; smoothing parameters are fitted by deterministic
simplex search on the one-step SSE.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..series import ForecastBundle
from . import _kernels as K

__all__ = ["DshwModel", "fit_dshw", "forecast_dshw"]

_START = {"alpha": 0.1, "gamma": 0.01, "delta": 0.1, "omega": 0.1, "lam": 0.1}
_MAX_FEV = 2000
_FTOL = 1e-8


@dataclass(frozen=True)
class DshwModel:
    """Fitted double-seasonal Holt-Winters model."""

    periods: Tuple[int, int]
    alpha: float
    gamma: float
    delta: float
    omega: float
    lam: float
    use_ar: bool
    level0: float
    trend0: float
    day_init: Tuple[float, ...]
    week_init: Tuple[float, ...]
    sse: float
    sigma2: float
    n_obs: int
    final_level: float
    final_trend: float
    final_day: Tuple[float, ...]
    final_week: Tuple[float, ...]
    last_error: float

    @property
    def label(self) -> str:
        return f"DSHW{self.periods}" + (" ar" if self.use_ar else "")


def _initial_states(y: np.ndarray, s1: int, s2: int) -> Tuple[float, float, np.ndarray, np.ndarray]:
    """Level/trend from the first two long cycles, indices from cycle averages."""
    level0 = float(y[:s2].mean())
    trend0 = float((y[s2:2 * s2].mean() - y[:s2].mean()) / s2)

    n_days = (2 * s2) // s1
    days = y[: n_days * s1].reshape(n_days, s1)
    day_means = days.mean(axis=1)
    d_idx = (days / day_means[:, None]).mean(axis=0)
    d_idx = np.clip(d_idx, 1e-4, None)
    d_idx *= s1 / d_idx.sum()

    weeks = y[: 2 * s2].reshape(2, s2)
    week_means = weeks.mean(axis=1)
    tiled_d = np.tile(d_idx, s2 // s1)
    w_idx = (weeks / (week_means[:, None] * tiled_d[None, :])).mean(axis=0)
    w_idx = np.clip(w_idx, 1e-4, None)
    w_idx *= s2 / w_idx.sum()
    return level0, trend0, d_idx, w_idx


def fit_dshw(train: Sequence[float], periods: Tuple[int, int], use_ar: bool = False) -> DshwModel:
    """Fit the double-seasonal recursion on strictly positive data."""
    y = np.ascontiguousarray(train, dtype=np.float64)
    s1, s2 = int(periods[0]), int(periods[1])
    if s1 < 2 or s2 % s1 != 0:
        raise ValueError(f"periods must nest with a short cycle >= 2, got {periods}")
    n = y.shape[0]
    if n < 2 * s2:
        raise ValueError(f"series shorter than two long cycles: need {2 * s2}, got {n}")
    if np.any(y <= 0.0):
        raise ValueError("non-positive values: the multiplicative form needs y > 0")

    level0, trend0, d_idx, w_idx = _initial_states(y, s1, s2)
    fcfg = np.concatenate([[level0, trend0], d_idx, w_idx])
    icfg = np.array([s1, s2, 1 if use_ar else 0], dtype=np.int64)

    z0 = [
        K.logit_box(_START["alpha"], K.ALPHA_LO, K.ALPHA_HI),
        K.logit_box(_START["gamma"], K.ALPHA_LO, K.ALPHA_HI),
        K.logit_box(_START["delta"], K.ALPHA_LO, K.ALPHA_HI),
        K.logit_box(_START["omega"], K.ALPHA_LO, K.ALPHA_HI),
    ]
    if use_ar:
        z0.append(K.logit_box(_START["lam"], K.AR_LO, K.AR_HI))
    z0 = np.asarray(z0, dtype=np.float64)

    z_best, _, _ = K.nm_minimize(K.KIND_DSHW, z0, y, icfg, fcfg, _MAX_FEV, _FTOL)
    alpha = K._expit_box(z_best[0], K.ALPHA_LO, K.ALPHA_HI)
    gamma = K._expit_box(z_best[1], K.ALPHA_LO, K.ALPHA_HI)
    delta = K._expit_box(z_best[2], K.ALPHA_LO, K.ALPHA_HI)
    omega = K._expit_box(z_best[3], K.ALPHA_LO, K.ALPHA_HI)
    lam = K._expit_box(z_best[4], K.AR_LO, K.AR_HI) if use_ar else 0.0

    residuals = np.empty(n)
    sse, lvl, tr, d_fin, w_fin, e_last = K._dshw_filter(
        y, s1, s2, alpha, gamma, delta, omega, lam, 1 if use_ar else 0,
        level0, trend0, d_idx, w_idx, residuals,
    )
    sse = float(sse)
    return DshwModel(
        periods=(s1, s2),
        alpha=float(alpha),
        gamma=float(gamma),
        delta=float(delta),
        omega=float(omega),
        lam=float(lam),
        use_ar=use_ar,
        level0=level0,
        trend0=trend0,
        day_init=tuple(float(v) for v in d_idx),
        week_init=tuple(float(v) for v in w_idx),
        sse=sse,
        sigma2=sse / n,
        n_obs=n,
        final_level=float(lvl),
        final_trend=float(tr),
        final_day=tuple(float(v) for v in d_fin),
        final_week=tuple(float(v) for v in w_fin),
        last_error=float(e_last),
    )


def _mean_path(model: DshwModel, h: int) -> np.ndarray:
    s1, s2 = model.periods
    d = np.asarray(model.final_day)
    w = np.asarray(model.final_week)
    out = np.empty(h)
    for k in range(1, h + 1):
        pos = model.n_obs + k - 1
        out[k - 1] = (model.final_level + k * model.final_trend) * d[pos % s1] * w[pos % s2]
        if model.use_ar:
            out[k - 1] += model.lam**k * model.last_error
    return out


def _simulate_paths(model: DshwModel, h: int, paths: int, seed: int) -> np.ndarray:
    s1, s2 = model.periods
    rng = np.random.default_rng(seed)
    eps = rng.normal(0.0, math.sqrt(model.sigma2), size=(paths, h))
    lvl = np.full(paths, model.final_level)
    tr = np.full(paths, model.final_trend)
    d = np.tile(np.asarray(model.final_day), (paths, 1))
    w = np.tile(np.asarray(model.final_week), (paths, 1))
    e_prev = np.full(paths, model.last_error)
    sims = np.empty((paths, h))
    for t in range(h):
        pos = model.n_obs + t
        i1 = pos % s1
        i2 = pos % s2
        dd = d[:, i1]
        ww = w[:, i2]
        yhat = (lvl + tr) * dd * ww
        if model.use_ar:
            yhat = yhat + model.lam * e_prev
        ysim = yhat + eps[:, t]
        sims[:, t] = ysim
        den = np.where(np.abs(dd * ww) < 1e-12, 1e-12, dd * ww)
        lvl_new = model.alpha * ysim / den + (1.0 - model.alpha) * (lvl + tr)
        tr = model.gamma * (lvl_new - lvl) + (1.0 - model.gamma) * tr
        lw = np.where(np.abs(lvl_new * ww) < 1e-12, 1e-12, lvl_new * ww)
        ld = np.where(np.abs(lvl_new * dd) < 1e-12, 1e-12, lvl_new * dd)
        d[:, i1] = model.delta * ysim / lw + (1.0 - model.delta) * dd
        w[:, i2] = model.omega * ysim / ld + (1.0 - model.omega) * ww
        lvl = lvl_new
        e_prev = eps[:, t]
    return sims


def forecast_dshw(model: DshwModel, h: int, level: float = 0.95,
                  paths: int = 1000, seed: int = 0) -> ForecastBundle:
    """Point forecasts with the most recent applicable seasonal indices.

    ``paths=0`` skips the interval simulation and returns degenerate bounds
    equal to the point forecasts.
    """
    if h < 1:
        raise ValueError(f"horizon must be >= 1, got {h}")
    points = _mean_path(model, h)
    if model.sigma2 <= 0.0 or paths < 1:
        lower = points.copy()
        upper = points.copy()
    else:
        sims = _simulate_paths(model, h, paths, seed)
        tail = (1.0 - level) / 2.0
        lower = np.quantile(sims, tail, axis=0)
        upper = np.quantile(sims, 1.0 - tail, axis=0)
    return ForecastBundle(points=points, lower=lower, upper=upper,
                          level=level, model_label=model.label)
