"""Experiment runners: standard vs multiple forecasts and the rolling load protocol."""

from __future__ import annotations

import hashlib
import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..combine import CombinedForecast, combine, combine_levels_report
from ..metrics import HorizonBucket, MetricInput, amse, horizon_buckets, mase, msis, scaled_denominator
from ..models import (
    DshwForecaster,
    Forecaster,
    ForecastResult,
    HoltWintersForecaster,
    forecaster_for,
)
from ..series import ForecastBundle, MultiSeasonalSeries, SeasonalSeries
from ..subsample import (
    EmptySubseriesError,
    day_view,
    enumerate_load_plan,
    enumerate_plan,
    extract,
)
from .config import ExperimentConfig, LoadConfig
from .ingest import Dataset, DatasetSeries

__all__ = [
    "EvaluationRow",
    "SeriesOutcome",
    "ExperimentResult",
    "LoadResult",
    "derive_seed",
    "run_standard",
    "run_multiple",
    "run_experiment",
    "run_rolling_load",
    "classify_and_slice",
    "aggregate_rows",
]

logger = logging.getLogger(__name__)

MIN_SUBSERIES_FACTOR = 2
MIN_SUBSERIES_FLOOR = 4


def derive_seed(master: int, series_id: str, start_season: int, width: int) -> int:
    """Stable per-window seed so adding or removing windows never perturbs others."""
    key = f"{master}:{series_id}:{start_season}:{width}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little")


@dataclass(frozen=True)
class EvaluationRow:
    """Per-series, per-method metric values plus the raw errors for DM tests."""

    series_id: str
    category: str
    classification: str
    mase_by_bucket: Dict[str, float]
    amse_by_bucket: Dict[str, float]
    msis_by_bucket: Dict[str, float]
    scaled_abs_errors: np.ndarray
    errors: np.ndarray
    failed: bool = False
    error: str = ""
    levels: Optional[Dict[int, np.ndarray]] = None


@dataclass(frozen=True)
class SeriesOutcome:
    series_id: str
    standard: Optional[EvaluationRow] = None
    multiple: Optional[EvaluationRow] = None


@dataclass(frozen=True)
class ExperimentResult:
    frequency_class: str
    buckets: Tuple[HorizonBucket, ...]
    outcomes: Tuple[SeriesOutcome, ...]
    skipped: Tuple[Tuple[str, str], ...]
    config: ExperimentConfig

    @property
    def standard_rows(self) -> List[EvaluationRow]:
        return [o.standard for o in self.outcomes if o.standard is not None]

    @property
    def multiple_rows(self) -> List[EvaluationRow]:
        return [o.multiple for o in self.outcomes if o.multiple is not None]


def _classification_label(result: ForecastResult) -> str:
    if result.has_trend is None or result.has_seasonal is None:
        return ""
    return f"({'T' if result.has_trend else 'N'},{'S' if result.has_seasonal else 'N'})"


def _evaluate(ds: DatasetSeries, points: np.ndarray, lower: np.ndarray, upper: np.ndarray,
              buckets: Sequence[HorizonBucket], alpha: float,
              series_id: str, category: str, classification: str,
              levels: Optional[Dict[int, np.ndarray]] = None) -> EvaluationRow:
    train = ds.series.values
    m = ds.series.frequency
    errors = ds.test - points
    denom = scaled_denominator(train, m)
    inp = MetricInput(train=train, test=ds.test, points=points,
                      lower=lower, upper=upper, m=m, alpha=alpha)
    mase_b: Dict[str, float] = {}
    amse_b: Dict[str, float] = {}
    msis_b: Dict[str, float] = {}
    train_mean = float(np.mean(train))
    for bucket in buckets:
        rng = bucket.range
        if denom > 0.0:
            mase_b[bucket.label] = mase(inp, rng)
            msis_b[bucket.label] = msis(inp, rng)
        else:
            mase_b[bucket.label] = float("nan")
            msis_b[bucket.label] = float("nan")
        amse_b[bucket.label] = amse(inp, rng) if train_mean != 0.0 else float("nan")
    scaled = np.abs(errors) / denom if denom > 0.0 else np.full_like(errors, np.nan)
    return EvaluationRow(
        series_id=series_id,
        category=category,
        classification=classification,
        mase_by_bucket=mase_b,
        amse_by_bucket=amse_b,
        msis_by_bucket=msis_b,
        scaled_abs_errors=scaled,
        errors=errors,
        levels=levels,
    )


def _failed_row(series_id: str, category: str, buckets: Sequence[HorizonBucket],
                horizon: int, message: str) -> EvaluationRow:
    nan_b = {bucket.label: float("nan") for bucket in buckets}
    return EvaluationRow(
        series_id=series_id,
        category=category,
        classification="",
        mase_by_bucket=dict(nan_b),
        amse_by_bucket=dict(nan_b),
        msis_by_bucket=dict(nan_b),
        scaled_abs_errors=np.full(horizon, np.nan),
        errors=np.full(horizon, np.nan),
        failed=True,
        error=message,
    )


def run_standard(ds: DatasetSeries, config: ExperimentConfig,
                 buckets: Sequence[HorizonBucket],
                 forecaster: Optional[Forecaster] = None) -> Tuple[ForecastBundle, EvaluationRow]:
    """Fit the configured family on the original series and score the test segment."""
    forecaster = forecaster or forecaster_for(config.model)
    series = ds.series
    seed = derive_seed(config.seed, series.id, 1, series.frequency)
    result = forecaster(series.values, series.frequency, ds.horizon,
                        level=config.pi_level, paths=config.paths, seed=seed)
    bundle = result.bundle
    row = _evaluate(ds, bundle.points, bundle.lower, bundle.upper, buckets,
                    1.0 - config.pi_level, series.id, series.category or "",
                    _classification_label(result))
    return bundle, row


def run_multiple(ds: DatasetSeries, config: ExperimentConfig,
                 buckets: Sequence[HorizonBucket],
                 forecaster: Optional[Forecaster] = None) -> Tuple[CombinedForecast, EvaluationRow]:
    """Forecast every sub-seasonal window and pool the aligned forecasts.

    Windows whose training part is shorter than ``max(4, 2 * width)`` are
    skipped with a warning (the full-width window is always kept: ingestion
    guarantees it is fittable, and the combination needs it for coverage).
    """
    forecaster = forecaster or forecaster_for(config.model)
    series = ds.series
    m = series.frequency
    plan = enumerate_plan(series, ds.horizon)
    weighted: List[Tuple[ForecastBundle, int]] = []
    classification = ""
    for window, multiplicity in plan.windows:
        try:
            sub = extract(series, window, ds.horizon)
        except EmptySubseriesError:
            logger.warning("series %s: window %s has no training data, skipped",
                           series.id, window.seasons)
            continue
        min_len = max(MIN_SUBSERIES_FLOOR, MIN_SUBSERIES_FACTOR * window.width)
        if window.width < m and sub.sub_values.shape[0] < min_len:
            logger.warning("series %s: window %s has %d observations (< %d), skipped",
                           series.id, window.seasons, sub.sub_values.shape[0], min_len)
            continue
        seed = derive_seed(config.seed, series.id, window.start_season, window.width)
        result = forecaster(sub.sub_values, sub.sub_frequency, sub.sub_horizon,
                            level=config.pi_level, paths=config.paths, seed=seed)
        bundle = replace(result.bundle, alignment=sub.alignment, source_window=window)
        weighted.append((bundle, multiplicity))
        if window.width == m:
            classification = _classification_label(result)
    combined = combine(weighted, ds.horizon, mode=config.combine_mode)
    levels = combine_levels_report(weighted, ds.horizon) if config.verbose else None
    row = _evaluate(ds, combined.points, combined.lower, combined.upper, buckets,
                    1.0 - config.pi_level, series.id, series.category or "",
                    classification, levels=levels)
    return combined, row


def _series_task(args: Tuple[DatasetSeries, ExperimentConfig, Tuple[HorizonBucket, ...]]) -> SeriesOutcome:
    """One series, both methods when configured; failures stay per-series."""
    ds, config, buckets = args
    sid = ds.series.id
    standard = multiple = None
    try:
        _, standard = run_standard(ds, config, buckets)
    except Exception as exc:  # noqa: BLE001 - one bad series must not kill the run
        logger.warning("series %s: standard run failed: %s", sid, exc)
        standard = _failed_row(sid, ds.series.category or "", buckets, ds.horizon, str(exc))
    if config.method == "multiple":
        try:
            _, multiple = run_multiple(ds, config, buckets)
        except Exception as exc:  # noqa: BLE001
            logger.warning("series %s: multiple run failed: %s", sid, exc)
            multiple = _failed_row(sid, ds.series.category or "", buckets, ds.horizon, str(exc))
    return SeriesOutcome(series_id=sid, standard=standard, multiple=multiple)


def run_experiment(dataset: Dataset, config: ExperimentConfig) -> ExperimentResult:
    """Run the configured methods over every series, optionally in parallel.

    Results are keyed and sorted by series id, so any worker count produces
    the same report.
    """
    config.validate()
    buckets = tuple(horizon_buckets(dataset.frequency_class))
    tasks = [(ds, config, buckets) for ds in dataset.series]
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_series_task, tasks, chunksize=8))
    else:
        outcomes = [_series_task(task) for task in tasks]
    outcomes.sort(key=lambda o: o.series_id)
    return ExperimentResult(
        frequency_class=dataset.frequency_class,
        buckets=buckets,
        outcomes=tuple(outcomes),
        skipped=dataset.skipped,
        config=config,
    )


def aggregate_rows(rows: Sequence[EvaluationRow],
                   buckets: Sequence[HorizonBucket]) -> Dict[str, Dict[str, float]]:
    """Equal-weight mean of per-series bucket values, skipping excluded series.

    Returns ``{metric: {bucket_label: mean, ..., "n": count}}`` where the
    count is the number of series entering that metric's average.
    """
    out: Dict[str, Dict[str, float]] = {}
    for metric in ("mase", "amse", "msis"):
        table: Dict[str, float] = {}
        n_used = 0
        for bucket in buckets:
            values = np.array(
                [getattr(row, f"{metric}_by_bucket")[bucket.label] for row in rows],
                dtype=np.float64,
            )
            finite = np.isfinite(values)
            table[bucket.label] = float(values[finite].mean()) if finite.any() else float("nan")
            n_used = int(finite.sum())
        table["n"] = float(n_used)
        out[metric] = table
    return out


def classify_and_slice(rows: Sequence[EvaluationRow],
                       buckets: Sequence[HorizonBucket]) -> Dict[str, Dict[str, Dict[str, float]]]:
    """Aggregate rows per trend/seasonality class of the fitted standard model."""
    by_class: Dict[str, List[EvaluationRow]] = {}
    for row in rows:
        if row.classification:
            by_class.setdefault(row.classification, []).append(row)
    return {label: aggregate_rows(group, buckets) for label, group in sorted(by_class.items())}


@dataclass(frozen=True)
class LoadOriginRow:
    origin: int
    scaled_abs_errors: Dict[str, np.ndarray]  # method -> per-step |e|/D


@dataclass(frozen=True)
class LoadResult:
    horizon: int
    methods: Tuple[str, ...]
    origins: Tuple[LoadOriginRow, ...]
    skipped_origins: Tuple[Tuple[int, str], ...]
    config: LoadConfig

    def curve(self, method: str) -> np.ndarray:
        """Mean scaled absolute error per horizon step across origins."""
        stack = np.stack([row.scaled_abs_errors[method] for row in self.origins])
        return stack.mean(axis=0)

    def overall(self, method: str) -> float:
        return float(self.curve(method).mean())


def _load_multiple_forecast(train: np.ndarray, config: LoadConfig,
                            series_id: str, origin: int) -> np.ndarray:
    s1, s2 = config.periods
    msub = MultiSeasonalSeries(values=train, periods=config.periods, id=series_id)
    view = day_view(msub)
    hw = HoltWintersForecaster()
    weighted: List[Tuple[ForecastBundle, int]] = []
    for level in enumerate_load_plan(msub, config.horizon):
        window = level.window
        try:
            sub = extract(view, window, config.horizon)
        except EmptySubseriesError:
            continue
        try:
            if window.width == 1:
                result = hw(sub.sub_values, level.periods[0], sub.sub_horizon,
                            level=0.95, paths=0, seed=0)
            else:
                dshw = DshwForecaster(use_ar=config.use_ar)
                result = dshw(sub.sub_values, window.width, sub.sub_horizon,
                              level=0.95, paths=0, seed=0)
        except ValueError as exc:
            logger.warning("origin %d: window %s skipped: %s", origin, window.seasons, exc)
            continue
        bundle = replace(result.bundle, alignment=sub.alignment, source_window=window)
        weighted.append((bundle, level.multiplicity))
    combined = combine(weighted, config.horizon, mode=config.combine_mode)
    return combined.points


def _origin_task(args: Tuple[np.ndarray, int, LoadConfig, str]) -> Optional[LoadOriginRow]:
    values, origin, config, series_id = args
    train = values[:origin]
    actual = values[origin:origin + config.horizon]
    s1 = config.periods[0]
    denom = scaled_denominator(train, s1)
    per_method: Dict[str, np.ndarray] = {}
    standard = DshwForecaster(use_ar=config.use_ar)
    points = standard(train, s1, config.horizon, level=0.95, paths=0, seed=0).bundle.points
    per_method["standard"] = np.abs(actual - points) / denom
    if config.method == "multiple":
        points = _load_multiple_forecast(train, config, series_id, origin)
        per_method["multiple"] = np.abs(actual - points) / denom
    return LoadOriginRow(origin=origin, scaled_abs_errors=per_method)


def run_rolling_load(series: MultiSeasonalSeries, config: LoadConfig) -> LoadResult:
    """Expanding-window rolling-origin evaluation of the load forecasters.

    Each origin forecasts the next ``horizon`` hours; origins advance by
    ``step`` so with step == horizon every evaluation hour is forecast once.
    """
    config.validate()
    values = series.values
    n = values.shape[0]
    if n < config.train_length + config.horizon:
        raise ValueError(
            f"series has {n} observations; need at least "
            f"{config.train_length + config.horizon} for one origin"
        )
    origin_list = list(range(config.train_length, n - config.horizon + 1, config.step))
    tasks = []
    skipped: List[Tuple[int, str]] = []
    for origin in origin_list:
        window_values = values[:origin + config.horizon]
        if np.any(window_values <= 0.0):
            reason = "non-positive demand in training or evaluation window"
            logger.warning("origin %d skipped: %s", origin, reason)
            skipped.append((origin, reason))
            continue
        tasks.append((values, origin, config, series.id))
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_origin_task, tasks, chunksize=1))
    else:
        rows = [_origin_task(task) for task in tasks]
    methods = ("standard", "multiple") if config.method == "multiple" else ("standard",)
    return LoadResult(
        horizon=config.horizon,
        methods=methods,
        origins=tuple(row for row in rows if row is not None),
        skipped_origins=tuple(skipped),
        config=config,
    )
