"""Equal-weight pooling of aligned sub-seasonal forecasts.

Two readings of "equal weights" are provided. ``pooled`` averages every
forecast instance covering a step, with the original series contributing its
multiplicity of identical instances. ``level-equal`` first averages within
each window width, then averages the per-width means. They agree whenever
the per-width means agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .series import ForecastBundle

__all__ = ["CombinedForecast", "combine", "combine_levels_report",
           "MODE_POOLED", "MODE_LEVEL_EQUAL"]

MODE_POOLED = "pooled"
MODE_LEVEL_EQUAL = "level-equal"


@dataclass(frozen=True)
class CombinedForecast:
    """Per-step pooled point and interval forecasts plus bookkeeping."""

    points: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    instance_counts: np.ndarray
    mode: str

    @property
    def horizon(self) -> int:
        return int(self.points.shape[0])


def _sorted_inputs(
    bundles: Sequence[Tuple[ForecastBundle, int]], h: int
) -> List[Tuple[ForecastBundle, int]]:
    """Canonical processing order so results do not depend on caller order."""
    checked = []
    for bundle, multiplicity in bundles:
        if bundle.alignment is None:
            raise ValueError("every bundle must carry an alignment into the horizon")
        if multiplicity < 1:
            raise ValueError(f"multiplicity must be >= 1, got {multiplicity}")
        for t in bundle.alignment:
            if not 1 <= t <= h:
                raise ValueError(f"alignment step {t} outside horizon 1..{h}")
        checked.append((bundle, multiplicity))

    def key(item: Tuple[ForecastBundle, int]):
        window = item[0].source_window
        if window is None:
            return (0, 0, item[0].alignment)
        return (window.width, window.start_season, item[0].alignment)

    return sorted(checked, key=key)


def combine(bundles: Sequence[Tuple[ForecastBundle, int]], h: int,
            mode: str = MODE_POOLED) -> CombinedForecast:
    """Combine (bundle, multiplicity) pairs into one forecast per horizon step.

    Lower and upper interval bounds are combined with exactly the same
    weighting as the points. Raises when some step in ``1..h`` is covered by
    no bundle (the full-width bundle normally guarantees coverage).
    """
    if mode not in (MODE_POOLED, MODE_LEVEL_EQUAL):
        raise ValueError(f"unknown combination mode {mode!r}")
    ordered = _sorted_inputs(bundles, h)

    counts = np.zeros(h, dtype=np.int64)
    for bundle, multiplicity in ordered:
        for t in bundle.alignment:
            counts[t - 1] += multiplicity
    uncovered = np.flatnonzero(counts == 0)
    if uncovered.size:
        raise ValueError(f"no coverage at step {int(uncovered[0]) + 1}")

    if mode == MODE_POOLED:
        points = _pooled_mean(ordered, h, counts, "points")
        lower = _pooled_mean(ordered, h, counts, "lower")
        upper = _pooled_mean(ordered, h, counts, "upper")
    else:
        points = _level_equal_mean(ordered, h, "points")
        lower = _level_equal_mean(ordered, h, "lower")
        upper = _level_equal_mean(ordered, h, "upper")

    return CombinedForecast(points=points, lower=lower, upper=upper,
                            instance_counts=counts, mode=mode)


def _pooled_mean(ordered: Sequence[Tuple[ForecastBundle, int]], h: int,
                 counts: np.ndarray, field: str) -> np.ndarray:
    """Instance-weighted mean, accumulated relative to the first covering value.

    The shifted accumulation makes two properties exact in floating point:
    identical instances average to themselves, and adding a constant to every
    input adds the same constant to the output.
    """
    ref = np.full(h, np.nan)
    for bundle, _ in ordered:
        values = getattr(bundle, field)
        for j, t in enumerate(bundle.alignment):
            if np.isnan(ref[t - 1]):
                ref[t - 1] = values[j]
    acc = np.zeros(h)
    for bundle, multiplicity in ordered:
        values = getattr(bundle, field)
        for j, t in enumerate(bundle.alignment):
            acc[t - 1] += multiplicity * (values[j] - ref[t - 1])
    return ref + acc / counts


def _level_equal_mean(ordered: Sequence[Tuple[ForecastBundle, int]], h: int,
                      field: str) -> np.ndarray:
    """Mean of per-width means, each stage using the shifted accumulation."""
    by_width: Dict[int, List[ForecastBundle]] = {}
    for bundle, _ in ordered:
        width = bundle.source_window.width if bundle.source_window is not None else 0
        by_width.setdefault(width, []).append(bundle)

    level_means: List[np.ndarray] = []
    for width in sorted(by_width):
        ref = np.full(h, np.nan)
        acc = np.zeros(h)
        cnt = np.zeros(h)
        for bundle in by_width[width]:
            values = getattr(bundle, field)
            for j, t in enumerate(bundle.alignment):
                if np.isnan(ref[t - 1]):
                    ref[t - 1] = values[j]
                acc[t - 1] += values[j] - ref[t - 1]
                cnt[t - 1] += 1
        with np.errstate(invalid="ignore"):
            level_means.append(np.where(cnt > 0, ref + acc / np.maximum(cnt, 1), np.nan))

    ref = np.full(h, np.nan)
    acc = np.zeros(h)
    cover = np.zeros(h)
    for means in level_means:
        for t in range(h):
            if np.isnan(means[t]):
                continue
            if np.isnan(ref[t]):
                ref[t] = means[t]
            acc[t] += means[t] - ref[t]
            cover[t] += 1
    return ref + acc / cover


def combine_levels_report(bundles: Sequence[Tuple[ForecastBundle, int]],
                          h: int) -> Dict[int, np.ndarray]:
    """Per-width mean point forecasts per step (NaN where a width covers nothing).

    Diagnostic companion to :func:`combine` for per-level visualisation.
    """
    ordered = _sorted_inputs(bundles, h)
    by_width: Dict[int, List[ForecastBundle]] = {}
    for bundle, _ in ordered:
        width = bundle.source_window.width if bundle.source_window is not None else 0
        by_width.setdefault(width, []).append(bundle)
    report: Dict[int, np.ndarray] = {}
    for width, group in sorted(by_width.items()):
        total = np.zeros(h)
        cnt = np.zeros(h)
        for bundle in group:
            for j, t in enumerate(bundle.alignment):
                total[t - 1] += bundle.points[j]
                cnt[t - 1] += 1
        means = np.full(h, np.nan)
        covered = cnt > 0
        means[covered] = total[covered] / cnt[covered]
        report[width] = means
    return report
