"""Additive-error exponential smoothing family with automatic AICc selection.

The candidate pool crosses trend {none, additive, damped} with seasonal
{none, additive, multiplicative}. Smoothing parameters and initial states
are fitted together by minimising the one-step in-sample SSE with a
deterministic simplex search; prediction intervals come from seeded Monte
Carlo sample paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..series import ForecastBundle
from . import _kernels as K

__all__ = [
    "ModelSpec",
    "FittedModel",
    "fit_ets",
    "fit_ets_auto",
    "forecast",
    "ets_components",
    "one_step_residuals",
]

TREND_OPTIONS = ("none", "additive", "damped")
SEASONAL_OPTIONS = ("none", "additive", "multiplicative")

_TREND_CODE = {"none": K.TREND_NONE, "additive": K.TREND_ADD, "damped": K.TREND_DAMPED}
_SEAS_CODE = {"none": K.SEAS_NONE, "additive": K.SEAS_ADD, "multiplicative": K.SEAS_MULT}
_SHORT = {"none": "N", "additive": "A", "damped": "Ad", "multiplicative": "M"}

# Fixed optimizer start (smoothing scale) and budget.
_START_ALPHA = 0.1
_START_BETA = 0.01
_START_GAMMA = 0.01
_START_PHI = 0.95
_MAX_FEV = 2000
_FTOL = 1e-8
_SSE_FLOOR = 1e-300


@dataclass(frozen=True)
class ModelSpec:
    """One candidate model form (error is always additive)."""

    trend: str
    seasonal: str
    period: int

    def __post_init__(self) -> None:
        if self.trend not in TREND_OPTIONS:
            raise ValueError(f"unknown trend {self.trend!r}")
        if self.seasonal not in SEASONAL_OPTIONS:
            raise ValueError(f"unknown seasonal {self.seasonal!r}")
        if self.period < 1:
            raise ValueError(f"period must be >= 1, got {self.period}")
        if self.seasonal != "none" and self.period < 2:
            raise ValueError("seasonal components need period >= 2")

    @property
    def label(self) -> str:
        return f"ETS(A,{_SHORT[self.trend]},{_SHORT[self.seasonal]})"

    @property
    def n_params(self) -> int:
        """Free parameters: smoothing weights plus optimised initial states."""
        k = 2  # alpha and the initial level
        if self.trend != "none":
            k += 2  # beta and the initial trend
        if self.trend == "damped":
            k += 1
        if self.seasonal != "none":
            k += 1 + (self.period - 1)  # gamma and the free seasonal states
        return k


@dataclass(frozen=True)
class FittedModel:
    """A fitted exponential-smoothing model with its states and fit statistics."""

    spec: ModelSpec
    alpha: float
    beta: float
    gamma: float
    phi: float
    level0: float
    trend0: float
    seasonal0: Tuple[float, ...]
    sse: float
    sigma2: float
    n_params: int
    aicc: float
    n_obs: int
    final_level: float
    final_trend: float
    final_seasonal: Tuple[float, ...]

    @property
    def label(self) -> str:
        return f"{self.spec.label} p={self.spec.period}"


def _aicc_value(n: int, sse: float, k: int) -> float:
    aic = n * math.log(max(sse, _SSE_FLOOR) / n) + 2 * k
    if n - k - 1 <= 0:
        return math.inf
    return aic + 2.0 * k * (k + 1) / (n - k - 1)


def _heuristic_states(y: np.ndarray, spec: ModelSpec) -> Tuple[float, float, np.ndarray]:
    """Deterministic starting states: linear fit for level/trend, cycle
    averages (or ratios) for seasonal indices."""
    n = y.shape[0]
    p = spec.period
    t_idx = np.arange(1.0, n + 1.0)
    if spec.seasonal != "none":
        design = np.column_stack([np.ones(n), t_idx])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        base = design @ coef
        if spec.seasonal == "additive":
            resid = y - base
            idx = np.array([resid[j::p].mean() for j in range(p)])
            idx -= idx.mean()
            y_sa = y - idx[np.arange(n) % p]
        else:
            safe = np.where(np.abs(base) < 1e-8, 1e-8, base)
            idx = np.array([(y[j::p] / safe[j::p]).mean() for j in range(p)])
            idx = np.clip(idx, 1e-4, None)
            idx *= p / idx.sum()
            y_sa = y / idx[np.arange(n) % p]
    else:
        idx = np.zeros(max(p, 1))
        y_sa = y
    w = min(n, max(10, 2 * p))
    if spec.trend == "none":
        return float(y_sa[:w].mean()), 0.0, idx
    design = np.column_stack([np.ones(w), np.arange(1.0, w + 1.0)])
    (intercept, slope), *_ = np.linalg.lstsq(design, y_sa[:w], rcond=None)
    return float(intercept), float(slope), idx


def _pack_start(spec: ModelSpec, l0: float, b0: float, idx: np.ndarray) -> np.ndarray:
    z = [K.logit_box(_START_ALPHA, K.ALPHA_LO, K.ALPHA_HI)]
    if spec.trend != "none":
        z.append(K.logit_box(_START_BETA / _START_ALPHA, K.ALPHA_LO, K.ALPHA_HI))
    if spec.seasonal != "none":
        z.append(K.logit_box(_START_GAMMA / (1.0 - _START_ALPHA), K.ALPHA_LO, K.ALPHA_HI))
    if spec.trend == "damped":
        z.append(K.logit_box(_START_PHI, K.PHI_LO, K.PHI_HI))
    z.append(l0)
    if spec.trend != "none":
        z.append(b0)
    if spec.seasonal != "none":
        z.extend(idx[: spec.period - 1])
    return np.asarray(z, dtype=np.float64)


def _unpack(spec: ModelSpec, z: np.ndarray) -> Tuple[float, float, float, float, float, float, np.ndarray]:
    k = 0
    alpha = K._expit_box(z[k], K.ALPHA_LO, K.ALPHA_HI)
    k += 1
    beta = 0.0
    if spec.trend != "none":
        beta = alpha * K._expit_box(z[k], K.ALPHA_LO, K.ALPHA_HI)
        k += 1
    gamma = 0.0
    if spec.seasonal != "none":
        gamma = (1.0 - alpha) * K._expit_box(z[k], K.ALPHA_LO, K.ALPHA_HI)
        k += 1
    phi = 1.0
    if spec.trend == "damped":
        phi = K._expit_box(z[k], K.PHI_LO, K.PHI_HI)
        k += 1
    l0 = float(z[k])
    k += 1
    b0 = 0.0
    if spec.trend != "none":
        b0 = float(z[k])
        k += 1
    p = spec.period
    s = np.zeros(max(p, 1))
    if spec.seasonal != "none":
        s[: p - 1] = z[k : k + p - 1]
        s[p - 1] = -s[: p - 1].sum() if spec.seasonal == "additive" else p - s[: p - 1].sum()
    return float(alpha), float(beta), float(gamma), float(phi), l0, b0, s


def _constant_model(y: np.ndarray, period: int) -> FittedModel:
    spec = ModelSpec(trend="none", seasonal="none", period=max(period, 1))
    n = y.shape[0]
    return FittedModel(
        spec=spec,
        alpha=K.ALPHA_LO,
        beta=0.0,
        gamma=0.0,
        phi=1.0,
        level0=float(y[0]),
        trend0=0.0,
        seasonal0=(),
        sse=0.0,
        sigma2=0.0,
        n_params=spec.n_params,
        aicc=_aicc_value(n, 0.0, spec.n_params),
        n_obs=n,
        final_level=float(y[0]),
        final_trend=0.0,
        final_seasonal=(),
    )


def fit_ets(train: Sequence[float], spec: ModelSpec) -> FittedModel:
    """Fit one model form by one-step SSE minimisation from the fixed start."""
    y = np.ascontiguousarray(train, dtype=np.float64)
    n = y.shape[0]
    if n < 4:
        raise ValueError(f"insufficient data: need at least 4 observations, got {n}")
    if spec.seasonal != "none" and n < 2 * spec.period:
        raise ValueError(
            f"insufficient data for a seasonal fit: need {2 * spec.period}, got {n}"
        )
    if np.all(y == y[0]):
        return _constant_model(y, spec.period)

    l0, b0, idx = _heuristic_states(y, spec)
    z0 = _pack_start(spec, l0, b0, idx)
    p = spec.period if spec.seasonal != "none" else max(spec.period, 1)
    icfg = np.array([p, _TREND_CODE[spec.trend], _SEAS_CODE[spec.seasonal]], dtype=np.int64)
    fcfg = np.zeros(1, dtype=np.float64)
    z_best, _, _ = K.nm_minimize(K.KIND_ETS, z0, y, icfg, fcfg, _MAX_FEV, _FTOL)

    alpha, beta, gamma, phi, l0, b0, s0 = _unpack(spec, z_best)
    residuals = np.empty(n)
    sse, l_fin, b_fin, s_fin = K._ets_filter(
        y, p, icfg[1], icfg[2], alpha, beta, gamma, phi, l0, b0, s0, residuals
    )
    sse = float(sse)
    k = spec.n_params
    seasonal0 = tuple(float(v) for v in s0[:p]) if spec.seasonal != "none" else ()
    final_seasonal = tuple(float(v) for v in s_fin[:p]) if spec.seasonal != "none" else ()
    return FittedModel(
        spec=spec,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        phi=phi,
        level0=l0,
        trend0=b0,
        seasonal0=seasonal0,
        sse=sse,
        sigma2=sse / n,
        n_params=k,
        aicc=_aicc_value(n, sse, k),
        n_obs=n,
        final_level=float(l_fin),
        final_trend=float(b_fin),
        final_seasonal=final_seasonal,
    )


def candidate_specs(n: int, period: int, min_value: float) -> list[ModelSpec]:
    """Admissible model forms for a series of length ``n``.

    Seasonal forms need period >= 2 and two full cycles; the multiplicative
    form additionally needs strictly positive data. Forms whose parameter
    count exhausts the sample are dropped (their AICc is undefined).
    """
    pool: list[ModelSpec] = []
    for seasonal in SEASONAL_OPTIONS:
        if seasonal != "none":
            if period < 2 or n < 2 * period:
                continue
            if seasonal == "multiplicative" and min_value <= 0.0:
                continue
        for trend in TREND_OPTIONS:
            spec = ModelSpec(trend=trend, seasonal=seasonal, period=period)
            if n - spec.n_params - 1 <= 0:
                continue
            pool.append(spec)
    return pool


def fit_ets_auto(train: Sequence[float], period: int) -> FittedModel:
    """Fit every admissible form and keep the smallest AICc.

    Ties go to the model with fewer parameters, then to the fixed candidate
    order (no component before additive before damped/multiplicative).
    """
    y = np.ascontiguousarray(train, dtype=np.float64)
    n = y.shape[0]
    if n < 4:
        raise ValueError(f"insufficient data: need at least 4 observations, got {n}")
    if period < 1:
        raise ValueError(f"period must be >= 1, got {period}")
    if np.all(y == y[0]):
        return _constant_model(y, period)

    pool = candidate_specs(n, period, float(y.min()))
    best: Optional[FittedModel] = None
    best_key: Tuple[float, int, int] = (math.inf, 0, 0)
    for rank, spec in enumerate(pool):
        fitted = fit_ets(y, spec)
        key = (fitted.aicc, fitted.n_params, rank)
        if best is None or key < best_key:
            best = fitted
            best_key = key
    if best is None:
        raise ValueError(f"no admissible model form for n={n}, period={period}")
    return best


def one_step_residuals(model: FittedModel, train: Sequence[float]) -> np.ndarray:
    """Replay the fitted recursion over the training data."""
    y = np.ascontiguousarray(train, dtype=np.float64)
    p = model.spec.period if model.spec.seasonal != "none" else max(model.spec.period, 1)
    s0 = np.asarray(model.seasonal0, dtype=np.float64) if model.seasonal0 else np.zeros(p)
    if s0.shape[0] < p:
        s0 = np.zeros(p)
    residuals = np.empty(y.shape[0])
    K._ets_filter(
        y,
        p,
        _TREND_CODE[model.spec.trend],
        _SEAS_CODE[model.spec.seasonal],
        model.alpha,
        model.beta,
        model.gamma,
        model.phi,
        model.level0,
        model.trend0,
        s0,
        residuals,
    )
    return residuals


def _simulate_paths(model: FittedModel, h: int, paths: int, seed: int) -> np.ndarray:
    trend = _TREND_CODE[model.spec.trend]
    seas = _SEAS_CODE[model.spec.seasonal]
    p = model.spec.period if seas != K.SEAS_NONE else max(model.spec.period, 1)
    rng = np.random.default_rng(seed)
    eps = rng.normal(0.0, math.sqrt(model.sigma2), size=(paths, h))
    level = np.full(paths, model.final_level)
    slope = np.full(paths, model.final_trend)
    s = np.tile(
        np.asarray(model.final_seasonal, dtype=np.float64) if model.final_seasonal else np.zeros(p),
        (paths, 1),
    )
    sims = np.empty((paths, h))
    for t in range(h):
        if trend == K.TREND_ADD:
            bc = slope
        elif trend == K.TREND_DAMPED:
            bc = model.phi * slope
        else:
            bc = np.zeros(paths)
        mu = level + bc
        j = (model.n_obs + t) % p
        if seas == K.SEAS_ADD:
            yhat = mu + s[:, j]
        elif seas == K.SEAS_MULT:
            yhat = mu * s[:, j]
        else:
            yhat = mu
        e = eps[:, t]
        sims[:, t] = yhat + e
        if seas == K.SEAS_MULT:
            sj = s[:, j]
            sj_safe = np.where(np.abs(sj) < 1e-12, 1e-12, sj)
            mu_safe = np.where(np.abs(mu) < 1e-12, 1e-12, mu)
            level = mu + model.alpha * e / sj_safe
            if trend != K.TREND_NONE:
                slope = bc + model.beta * e / sj_safe
            s[:, j] = sj + model.gamma * e / mu_safe
        else:
            level = mu + model.alpha * e
            if trend != K.TREND_NONE:
                slope = bc + model.beta * e
            if seas == K.SEAS_ADD:
                s[:, j] = s[:, j] + model.gamma * e
    return sims


def forecast(model: FittedModel, h: int, level: float = 0.95,
             paths: int = 1000, seed: int = 0) -> ForecastBundle:
    """Mean forecast path plus empirical interval bounds from simulated paths."""
    if h < 1:
        raise ValueError(f"horizon must be >= 1, got {h}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"coverage level must lie in (0, 1), got {level}")
    trend = _TREND_CODE[model.spec.trend]
    seas = _SEAS_CODE[model.spec.seasonal]
    p = model.spec.period if seas != K.SEAS_NONE else max(model.spec.period, 1)
    s_fin = np.asarray(model.final_seasonal, dtype=np.float64) if model.final_seasonal else np.zeros(p)
    points = np.asarray(
        K._ets_path(h, p, model.n_obs, trend, seas, model.phi,
                    model.final_level, model.final_trend, s_fin)
    )
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


def ets_components(model: FittedModel) -> Tuple[bool, bool]:
    """(has_trend, has_seasonal) of the selected form."""
    return model.spec.trend != "none", model.spec.seasonal != "none"
