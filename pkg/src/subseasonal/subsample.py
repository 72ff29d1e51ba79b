"""Construction of sub-seasonal series.

A seasonal series with frequency ``m`` is cut into subseries that keep only
``k`` adjacent seasons (wrap-around allowed). Each width-``k`` subseries is a
regular series of frequency ``k``; its forecast steps map back to the
original horizon steps whose season falls inside the window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .series import MultiSeasonalSeries, SeasonalSeries, season_of

__all__ = [
    "SeasonWindow",
    "SubseriesPlan",
    "AlignedSubseries",
    "LoadLevelWindow",
    "EmptySubseriesError",
    "count_subseries",
    "enumerate_plan",
    "extract",
    "enumerate_load_plan",
    "day_view",
]


class EmptySubseriesError(ValueError):
    """Raised when no training observation falls inside a window."""


@dataclass(frozen=True, order=True)
class SeasonWindow:
    """A contiguous block of ``width`` seasons out of ``m``, starting at ``start_season``.

    Wrap-around blocks are canonicalised by their start season, and the full
    block (``width == m``) always starts at season 1.
    """

    start_season: int
    width: int
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"frequency must be >= 1, got {self.m}")
        if not 1 <= self.width <= self.m:
            raise ValueError(f"width must lie in [1, {self.m}], got {self.width}")
        if not 1 <= self.start_season <= self.m:
            raise ValueError(f"start season must lie in [1, {self.m}], got {self.start_season}")
        if self.width == self.m and self.start_season != 1:
            raise ValueError("the full-width window is canonical with start season 1")

    @property
    def seasons(self) -> Tuple[int, ...]:
        """Covered seasons in cyclic order starting at ``start_season``."""
        return tuple((self.start_season - 1 + j) % self.m + 1 for j in range(self.width))

    def covers(self, season: int) -> bool:
        offset = (season - self.start_season) % self.m
        return offset < self.width

    def position_of(self, season: int) -> int:
        """1-based position of ``season`` within the window's cyclic order."""
        offset = (season - self.start_season) % self.m
        if offset >= self.width:
            raise ValueError(f"season {season} is not covered by {self}")
        return offset + 1


@dataclass(frozen=True)
class SubseriesPlan:
    """All windows needed for a horizon, with the multiplicity each carries in combination."""

    windows: Tuple[Tuple[SeasonWindow, int], ...]
    expected_count: int
    horizon_seasons: frozenset[int]


@dataclass(frozen=True)
class AlignedSubseries:
    """An extracted subseries plus the map from its forecast steps to original steps.

    ``sub_values[j]`` has phase ``(sub_start_phase - 1 + j) % sub_frequency + 1``
    within the window's own seasonal cycle; the j-th subseries forecast step
    (1-based) targets original horizon step ``alignment[j - 1]``.
    """

    window: SeasonWindow
    sub_values: np.ndarray
    sub_frequency: int
    sub_horizon: int
    alignment: Tuple[int, ...]
    sub_start_phase: int = 1

    def __post_init__(self) -> None:
        arr = np.asarray(self.sub_values, dtype=np.float64).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "sub_values", arr)
        object.__setattr__(self, "alignment", tuple(int(t) for t in self.alignment))


@dataclass(frozen=True)
class LoadLevelWindow:
    """One entry of the multi-seasonal load plan.

    Width-1 windows reduce to a single weekly cycle; wider windows keep a
    within-day period ``w`` nested inside a weekly period ``7 w``.
    """

    window: SeasonWindow
    periods: Tuple[int, ...]  # (7,) for width 1, (w, 7 w) otherwise
    multiplicity: int


def count_subseries(m: int, h: int) -> int:
    """Number of distinct subseries needed to cover horizon ``h`` at frequency ``m``.

    When ``h < m`` only windows touching the seasons of the next ``h`` steps
    are needed; from ``h >= m`` onwards every window is.
    """
    if m <= 0:
        raise ValueError(f"frequency must be positive, got {m}")
    if h <= 0:
        raise ValueError(f"horizon must be positive, got {h}")
    if h < m:
        return (m - h) * (m + h - 1) // 2 + (h - 1) * m + 1
    return m * (m - 1) + 1


def _horizon_seasons(series: SeasonalSeries, h: int) -> frozenset[int]:
    t_len = len(series)
    return frozenset(season_of(series, t_len + t) for t in range(1, h + 1))


def enumerate_plan(series: SeasonalSeries, h: int) -> SubseriesPlan:
    """Enumerate every window whose seasons intersect the next ``h`` steps.

    Widths ``1..m-1`` contribute at most ``m`` windows each (multiplicity 1);
    the full-width window is listed once with multiplicity ``m`` so that the
    original series carries the same total weight as each narrower level.
    """
    if h < 1:
        raise ValueError(f"horizon must be >= 1, got {h}")
    m = series.frequency
    targets = _horizon_seasons(series, h)
    windows: List[Tuple[SeasonWindow, int]] = []
    for width in range(1, m):
        for start in range(1, m + 1):
            window = SeasonWindow(start_season=start, width=width, m=m)
            if any(window.covers(s) for s in targets):
                windows.append((window, 1))
    windows.append((SeasonWindow(start_season=1, width=m, m=m), m))
    plan = SubseriesPlan(
        windows=tuple(windows),
        expected_count=count_subseries(m, h),
        horizon_seasons=targets,
    )
    if len(plan.windows) != plan.expected_count:
        raise AssertionError(
            f"window enumeration produced {len(plan.windows)} windows, "
            f"expected {plan.expected_count} for m={m}, h={h}"
        )
    return plan


def extract(series: SeasonalSeries, window: SeasonWindow, h: int) -> AlignedSubseries:
    """Extract the observations whose season lies in ``window`` and align its horizon.

    Raises :class:`EmptySubseriesError` when the window selects no training
    observation; callers skip such windows.
    """
    if window.m != series.frequency:
        raise ValueError(f"window frequency {window.m} does not match series {series.frequency}")
    t_len = len(series)
    keep = [t for t in range(1, t_len + 1) if window.covers(season_of(series, t))]
    if not keep:
        raise EmptySubseriesError(
            f"window {window.seasons} selects no observation of series {series.id!r}"
        )
    alignment = tuple(t for t in range(1, h + 1) if window.covers(season_of(series, t_len + t)))
    sub_values = series.values[np.asarray(keep, dtype=np.intp) - 1]
    return AlignedSubseries(
        window=window,
        sub_values=sub_values,
        sub_frequency=window.width,
        sub_horizon=len(alignment),
        alignment=alignment,
        sub_start_phase=window.position_of(season_of(series, keep[0])),
    )


def enumerate_load_plan(series: MultiSeasonalSeries, h: int) -> List[LoadLevelWindow]:
    """Window plan for a double-seasonal series with nested day/week cycles.

    The windows partition the short (within-day) cycle exactly as
    :func:`enumerate_plan` does. A width-1 window keeps one slot per day, so
    only the weekly cycle survives (period 7); a width-``w`` window keeps a
    within-day period ``w`` and a weekly period ``7 w``. The full-width window
    is the original series with its native periods.
    """
    s1, s2 = series.periods
    if s2 != 7 * s1:
        raise ValueError(f"load plan requires nested day/week periods (s1, 7*s1), got {series.periods}")
    if h > s1:
        raise ValueError(f"per-step load horizon must not exceed the short period {s1}, got {h}")
    plan = enumerate_plan(day_view(series), h)
    levels: List[LoadLevelWindow] = []
    for window, multiplicity in plan.windows:
        if window.width == 1:
            periods: Tuple[int, ...] = (7,)
        else:
            periods = (window.width, 7 * window.width)
        levels.append(LoadLevelWindow(window=window, periods=periods, multiplicity=multiplicity))
    return levels


def day_view(series: MultiSeasonalSeries) -> SeasonalSeries:
    """The series re-read as a plain seasonal series over its short cycle."""
    return SeasonalSeries(
        values=series.values,
        frequency=series.periods[0],
        start_phase=series.start_offsets[0],
        id=series.id,
    )
