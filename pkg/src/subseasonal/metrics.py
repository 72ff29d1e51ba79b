"""Forecast evaluation metrics and the Diebold-Mariano comparison test.

MASE and MSIS are scaled by the in-sample mean absolute seasonal difference;
AMSE scales the absolute mean signed error by the training mean. All three
are invariant to positive rescaling of the data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import t as student_t

__all__ = [
    "MetricInput",
    "DmResult",
    "scaled_denominator",
    "mase",
    "amse",
    "msis",
    "dm_test",
    "horizon_buckets",
    "HorizonBucket",
]


@dataclass(frozen=True)
class MetricInput:
    """Everything needed to score one forecast of one series."""

    train: np.ndarray
    test: np.ndarray
    points: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    m: int
    alpha: float = 0.05

    def __post_init__(self) -> None:
        for name in ("train", "test", "points", "lower", "upper"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        h = self.test.shape[0]
        if self.points.shape[0] != h or self.lower.shape[0] != h or self.upper.shape[0] != h:
            raise ValueError("test, points and interval bounds must share a length")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.train.shape[0] <= self.m:
            raise ValueError(
                f"training length {self.train.shape[0]} must exceed the frequency {self.m}"
            )

    @property
    def horizon(self) -> int:
        return int(self.test.shape[0])


def scaled_denominator(train: Sequence[float], m: int) -> float:
    """Mean absolute seasonal difference of the training data."""
    y = np.asarray(train, dtype=np.float64)
    if y.shape[0] <= m:
        raise ValueError(f"need more than {m} observations for a seasonal difference")
    return float(np.mean(np.abs(y[m:] - y[:-m])))


def _slice(inp: MetricInput, horizon_range: Tuple[int, int]) -> slice:
    a, b = horizon_range
    if not 1 <= a <= b <= inp.horizon:
        raise ValueError(f"horizon range {horizon_range} outside 1..{inp.horizon}")
    return slice(a - 1, b)


def mase(inp: MetricInput, horizon_range: Optional[Tuple[int, int]] = None) -> float:
    """Mean absolute error over the range, scaled by the seasonal-difference mean."""
    if horizon_range is None:
        horizon_range = (1, inp.horizon)
    d = scaled_denominator(inp.train, inp.m)
    if d == 0.0:
        raise ZeroDivisionError("zero scaled denominator")
    sl = _slice(inp, horizon_range)
    return float(np.mean(np.abs(inp.test[sl] - inp.points[sl])) / d)


def amse(inp: MetricInput, horizon_range: Optional[Tuple[int, int]] = None) -> float:
    """Absolute mean signed error over the range, scaled by the training mean."""
    if horizon_range is None:
        horizon_range = (1, inp.horizon)
    train_mean = float(np.mean(inp.train))
    if train_mean == 0.0:
        raise ZeroDivisionError("zero train mean")
    sl = _slice(inp, horizon_range)
    return float(abs(np.mean(inp.test[sl] - inp.points[sl])) / train_mean)


def msis(inp: MetricInput, horizon_range: Optional[Tuple[int, int]] = None) -> float:
    """Mean scaled interval score: width plus out-of-interval penalties."""
    if horizon_range is None:
        horizon_range = (1, inp.horizon)
    d = scaled_denominator(inp.train, inp.m)
    if d == 0.0:
        raise ZeroDivisionError("zero scaled denominator")
    sl = _slice(inp, horizon_range)
    y = inp.test[sl]
    lo = inp.lower[sl]
    hi = inp.upper[sl]
    width = hi - lo
    below = (lo - y) * (y < lo)
    above = (y - hi) * (y > hi)
    score = width + (2.0 / inp.alpha) * (below + above)
    return float(np.mean(score) / d)


@dataclass(frozen=True)
class DmResult:
    """Outcome of a Diebold-Mariano test with the small-sample correction."""

    statistic: float
    p_value: float
    horizon: int
    n: int
    verdict: str  # "a_better" | "b_better" | "equal" | "no_decision"


def dm_test(errors_a: Sequence[float], errors_b: Sequence[float], h: int = 1,
            loss: str = "absolute", significance: float = 0.05) -> DmResult:
    """Test equal forecast accuracy of two error sequences.

    The loss differential is L(a) - L(b), its long-run variance uses
    autocovariances up to lag h-1 with rectangular truncation, and the
    statistic carries the finite-sample correction factor before being
    compared against a Student-t with n-1 degrees of freedom (two-sided).
    Degenerate differentials (identical, or non-positive variance estimate)
    yield a "no_decision" verdict instead of a statistic.
    """
    ea = np.asarray(errors_a, dtype=np.float64)
    eb = np.asarray(errors_b, dtype=np.float64)
    if ea.shape != eb.shape:
        raise ValueError("error sequences must have equal length")
    n = ea.shape[0]
    if n < h + 1:
        raise ValueError(f"need at least h+1={h + 1} errors, got {n}")
    if loss == "absolute":
        d = np.abs(ea) - np.abs(eb)
    elif loss == "squared":
        d = ea**2 - eb**2
    else:
        raise ValueError(f"unknown loss {loss!r}; expected 'absolute' or 'squared'")

    d_bar = float(d.mean())
    centred = d - d_bar
    gamma = np.empty(h)
    for lag in range(h):
        gamma[lag] = float(np.sum(centred[: n - lag] * centred[lag:]) / n)
    variance = (gamma[0] + 2.0 * gamma[1:].sum()) / n
    if variance <= 0.0:
        return DmResult(statistic=math.nan, p_value=math.nan, horizon=h, n=n,
                        verdict="no_decision")

    statistic = d_bar / math.sqrt(variance)
    correction = math.sqrt((n + 1 - 2 * h + h * (h - 1) / n) / n)
    statistic *= correction
    p_value = float(2.0 * student_t.sf(abs(statistic), df=n - 1))
    if p_value < significance:
        verdict = "a_better" if statistic < 0 else "b_better"
    else:
        verdict = "equal"
    return DmResult(statistic=float(statistic), p_value=p_value, horizon=h, n=n,
                    verdict=verdict)


@dataclass(frozen=True)
class HorizonBucket:
    label: str
    start: int
    end: int

    @property
    def range(self) -> Tuple[int, int]:
        return (self.start, self.end)


_BUCKETS = {
    "quarterly": ((1, 1), (1, 3), (4, 6), (7, 8), (1, 8)),
    "monthly": ((1, 1), (1, 6), (7, 12), (13, 18), (1, 18)),
    "hourly": ((1, 1), (1, 16), (17, 32), (33, 48), (1, 48)),
}


def horizon_buckets(frequency_class: str) -> list[HorizonBucket]:
    """Reporting ranges per frequency class (single step, short/mid/long, overall)."""
    try:
        ranges = _BUCKETS[frequency_class]
    except KeyError:
        raise ValueError(
            f"unknown frequency class {frequency_class!r}; expected one of {sorted(_BUCKETS)}"
        )
    buckets = []
    for a, b in ranges:
        label = f"h{a}" if a == b else f"h{a}-{b}"
        buckets.append(HorizonBucket(label=label, start=a, end=b))
    return buckets
