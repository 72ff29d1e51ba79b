"""Seeded synthetic dataset builders for demos and desk-scale evaluation runs."""

from __future__ import annotations

import csv
import json
from datetime import datetime, timedelta
from pathlib import Path
from typing import Dict, Union

import numpy as np

__all__ = [
    "trend_seasonal_dataset",
    "quarterly_demo_dataset",
    "synthetic_load_values",
    "write_dataset_json",
    "write_load_csv",
]


def trend_seasonal_dataset(n_series: int = 200, frequency: int = 12, cycles: int = 4,
                           horizon: int = 18, seed: int = 20240, noise_sd: float = 4.0,
                           amp_range: tuple = (0.4, 1.4)) -> Dict:
    """Monthly-style series with linear trend, additive seasonal pattern and noise.

    The seasonal amplitude (``amp_range`` times the noise level) is
    deliberately borderline so that the standard automatic fit misses the
    seasonal component on a sizable share of series.
    """
    rng = np.random.default_rng(seed)
    n_train = frequency * cycles
    records = []
    for i in range(n_series):
        base = rng.uniform(50.0, 150.0)
        slope = rng.uniform(0.3, 1.5)
        amp = rng.uniform(*amp_range) * noise_sd
        pattern = rng.normal(0.0, amp, size=frequency)
        pattern -= pattern.mean()
        t = np.arange(1, n_train + horizon + 1)
        signal = base + slope * t + pattern[(t - 1) % frequency]
        noise = rng.normal(0.0, noise_sd, size=t.shape[0])
        y = signal + noise
        records.append({
            "id": f"syn{i + 1:03d}",
            "frequency": frequency,
            "start_phase": 1,
            "horizon": horizon,
            "category": "synthetic",
            "train": [float(v) for v in y[:n_train]],
            "test": [float(v) for v in y[n_train:]],
        })
    return {"frequency_class": "monthly", "series": records}


def quarterly_demo_dataset(n_series: int = 8, seed: int = 7, horizon: int = 8) -> Dict:
    """A small quarterly dataset for demos and fast harness tests."""
    rng = np.random.default_rng(seed)
    records = []
    categories = ("industry", "demographic")
    for i in range(n_series):
        n_train = int(rng.integers(6, 10)) * 4
        base = rng.uniform(200.0, 400.0)
        slope = rng.uniform(0.5, 4.0)
        pattern = rng.normal(0.0, 12.0, size=4)
        pattern -= pattern.mean()
        t = np.arange(1, n_train + horizon + 1)
        y = base + slope * t + pattern[(t - 1) % 4] + rng.normal(0.0, 5.0, size=t.shape[0])
        records.append({
            "id": f"q{i + 1:02d}",
            "frequency": 4,
            "horizon": horizon,
            "category": categories[i % len(categories)],
            "train": [float(v) for v in y[:n_train]],
            "test": [float(v) for v in y[n_train:]],
        })
    return {"frequency_class": "quarterly", "series": records}


def synthetic_load_values(weeks: int = 12, seed: int = 2000, base: float = 30000.0,
                          noise_sd: float = 0.01) -> np.ndarray:
    """Hourly demand with an hour-of-day profile nested in a day-of-week profile."""
    rng = np.random.default_rng(seed)
    hours = np.arange(weeks * 168)
    hour_of_day = hours % 24
    day_of_week = (hours // 24) % 7
    daily = 1.0 + 0.25 * np.sin(2 * np.pi * (hour_of_day - 7) / 24.0) \
        + 0.08 * np.sin(4 * np.pi * hour_of_day / 24.0)
    weekly = np.array([1.06, 1.08, 1.07, 1.05, 1.02, 0.88, 0.84])[day_of_week]
    drift = 1.0 + 0.02 * hours / hours.shape[0]
    y = base * daily * weekly * drift * (1.0 + rng.normal(0.0, noise_sd, hours.shape[0]))
    return np.maximum(y, 1.0)


def write_dataset_json(path: Union[str, Path], dataset: Dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(dataset), encoding="utf-8")
    return path


def write_load_csv(path: Union[str, Path], values: np.ndarray,
                   start: str = "2000-06-05T00:00") -> Path:
    """Write hourly demand rows under the ``timestamp,demand`` header."""
    path = Path(path)
    t0 = datetime.fromisoformat(start)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp", "demand"])
        for i, value in enumerate(values):
            writer.writerow([(t0 + timedelta(hours=i)).isoformat(timespec="minutes"),
                             format(float(value), ".6f")])
    return path
