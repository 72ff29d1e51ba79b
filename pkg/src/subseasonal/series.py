"""Core value types: seasonal series, multi-seasonal series and forecast bundles.

All types are immutable after construction and safe to share across workers.
Indices and season phases are 1-based everywhere in the public API.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "SeasonalSeries",
    "MultiSeasonalSeries",
    "ForecastBundle",
    "season_of",
    "validate_series",
]


def _as_readonly_array(values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("series values must be one-dimensional")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SeasonalSeries:
    """A univariate series observed at a fixed seasonal frequency.

    ``start_phase`` is the season (in ``1..frequency``) of the first
    observation, so the season of any index is pure calendar arithmetic.
    Construction is permissive; invariants are reported by
    :func:`validate_series` so ingestion can skip bad records instead of
    crashing on them.
    """

    values: np.ndarray
    frequency: int
    start_phase: int = 1
    id: str = ""
    category: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_readonly_array(self.values))

    def __len__(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class MultiSeasonalSeries:
    """A series with two nested seasonal cycles, e.g. hours (24) within weeks (168).

    The short period must be at least 2 and divide the long one.
    ``start_offsets`` give the 1-based position of the first observation
    within each cycle.
    """

    values: np.ndarray
    periods: Tuple[int, int]
    start_offsets: Tuple[int, int] = (1, 1)
    id: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_readonly_array(self.values))
        s1, s2 = self.periods
        if s1 < 2:
            raise ValueError(f"short period must be >= 2, got {s1}")
        if s2 % s1 != 0:
            raise ValueError(f"periods must nest: {s2} is not a multiple of {s1}")
        o1, o2 = self.start_offsets
        if not (1 <= o1 <= s1 and 1 <= o2 <= s2):
            raise ValueError(f"start offsets {self.start_offsets} out of range for {self.periods}")

    def __len__(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class ForecastBundle:
    """Point forecasts plus interval bounds for one (sub)series.

    ``alignment`` maps the j-th forecast step of a subseries to the original
    horizon step ``alignment[j]``; it is strictly increasing when present.
    ``lower <= upper`` is required elementwise, but the point forecast is not
    required to sit inside the interval (combination can break nesting).
    """

    points: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    level: float
    model_label: str = ""
    source_window: Optional["SeasonWindow"] = None  # noqa: F821 (defined in subsample)
    alignment: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        for name in ("points", "lower", "upper"):
            object.__setattr__(self, name, _as_readonly_array(getattr(self, name)))
        h = self.points.shape[0]
        if self.lower.shape[0] != h or self.upper.shape[0] != h:
            raise ValueError("points, lower and upper must have equal length")
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"coverage level must lie in (0, 1), got {self.level}")
        if np.any(self.lower > self.upper + 1e-12):
            raise ValueError("lower bound exceeds upper bound")
        if self.alignment is not None:
            alignment = tuple(int(t) for t in self.alignment)
            object.__setattr__(self, "alignment", alignment)
            if len(alignment) != h:
                raise ValueError("alignment length must match the number of forecast steps")
            if any(b <= a for a, b in zip(alignment, alignment[1:])):
                raise ValueError("alignment must be strictly increasing")

    @property
    def horizon(self) -> int:
        return int(self.points.shape[0])


def season_of(series: SeasonalSeries, index: int) -> int:
    """Season (in ``1..m``) of the 1-based observation ``index``.

    Indices beyond the observed length address future calendar slots.
    """
    if index < 1:
        raise ValueError(f"index must be >= 1, got {index}")
    return (series.start_phase - 1 + index - 1) % series.frequency + 1


def validate_series(series: SeasonalSeries) -> list[str]:
    """Return all invariant violations; an empty list means the series is valid."""
    problems: list[str] = []
    if len(series) < 1:
        problems.append("empty series")
    finite = np.isfinite(series.values)
    if not finite.all():
        for idx in np.flatnonzero(~finite):
            problems.append(f"non-finite value at index {int(idx) + 1}")
    if series.frequency < 1:
        problems.append(f"frequency must be >= 1, got {series.frequency}")
    elif not 1 <= series.start_phase <= series.frequency:
        problems.append("phase out of range")
    return problems
