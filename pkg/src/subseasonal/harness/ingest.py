"""Dataset ingestion: the JSON series format and the hourly load CSV."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from ..series import MultiSeasonalSeries, SeasonalSeries, validate_series

__all__ = ["IngestError", "DatasetSeries", "Dataset", "ingest_dataset", "read_load_csv",
           "DEFAULT_FREQUENCY", "DEFAULT_HORIZON"]

logger = logging.getLogger(__name__)

DEFAULT_FREQUENCY = {"quarterly": 4, "monthly": 12, "hourly": 24}
DEFAULT_HORIZON = {"quarterly": 8, "monthly": 18, "hourly": 48}


class IngestError(ValueError):
    """Malformed input file (maps to CLI exit code 2)."""


@dataclass(frozen=True)
class DatasetSeries:
    """One series with its held-out test segment and evaluation horizon."""

    series: SeasonalSeries
    test: np.ndarray
    horizon: int


@dataclass(frozen=True)
class Dataset:
    frequency_class: str
    series: Tuple[DatasetSeries, ...]
    skipped: Tuple[Tuple[str, str], ...]  # (series id, reason)


def _require(record: dict, key: str, rid: str):
    if key not in record:
        raise IngestError(f"series {rid!r}: missing required field {key!r}")
    return record[key]


def ingest_dataset(path: Union[str, Path],
                   category: Optional[str] = None,
                   ids: Optional[frozenset] = None) -> Dataset:
    """Load and validate the JSON dataset format.

    Records violating series invariants or metric preconditions are skipped
    with a logged warning and reported in ``Dataset.skipped``; malformed
    documents raise :class:`IngestError`.
    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise IngestError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc

    if not isinstance(doc, dict) or "series" not in doc:
        raise IngestError(f"{path}: expected an object with a 'series' array")
    frequency_class = doc.get("frequency_class")
    if frequency_class not in DEFAULT_FREQUENCY:
        raise IngestError(
            f"{path}: frequency_class must be one of {sorted(DEFAULT_FREQUENCY)}, "
            f"got {frequency_class!r}"
        )

    kept: list[DatasetSeries] = []
    skipped: list[Tuple[str, str]] = []
    for i, record in enumerate(doc["series"]):
        rid = str(record.get("id", f"series{i + 1}"))
        if ids is not None and rid not in ids:
            continue
        rec_category = record.get("category")
        if category is not None and rec_category != category:
            continue
        try:
            train = np.asarray(_require(record, "train", rid), dtype=np.float64)
            test = np.asarray(_require(record, "test", rid), dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise IngestError(f"series {rid!r} (record {i + 1}): non-numeric data: {exc}") from exc
        frequency = int(record.get("frequency", DEFAULT_FREQUENCY[frequency_class]))
        horizon = int(record.get("horizon", DEFAULT_HORIZON[frequency_class]))
        start_phase = int(record.get("start_phase", 1))

        series = SeasonalSeries(values=train, frequency=frequency,
                                start_phase=start_phase, id=rid, category=rec_category)
        problems = validate_series(series)
        if not np.isfinite(test).all():
            problems.append("non-finite value in test segment")
        if horizon < 1:
            problems.append(f"horizon must be >= 1, got {horizon}")
        elif test.shape[0] < horizon:
            problems.append(f"test segment shorter than horizon {horizon}")
        min_train = max(frequency + 2, 4)
        if train.shape[0] < min_train:
            problems.append(
                f"train too short for evaluation: need {min_train} observations, got {train.shape[0]}"
            )
        if problems:
            reason = "; ".join(problems)
            logger.warning("skipping series %s: %s", rid, reason)
            skipped.append((rid, reason))
            continue
        kept.append(DatasetSeries(series=series, test=test[:horizon], horizon=horizon))

    return Dataset(frequency_class=frequency_class, series=tuple(kept), skipped=tuple(skipped))


def read_load_csv(path: Union[str, Path], periods: Tuple[int, int]) -> MultiSeasonalSeries:
    """Read an hourly demand CSV with a ``timestamp,demand`` header.

    Rows must be in time order; the timestamp column is carried for humans
    and not interpreted.
    """
    path = Path(path)
    values: list[float] = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip().lower() for c in header[:2]] != ["timestamp", "demand"]:
            raise IngestError(f"{path}: expected a 'timestamp,demand' header, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                values.append(float(row[1]))
            except (IndexError, ValueError) as exc:
                raise IngestError(f"{path}: line {lineno}: bad demand value") from exc
    if not values:
        raise IngestError(f"{path}: no data rows")
    return MultiSeasonalSeries(values=np.asarray(values), periods=periods, id=path.stem)
