"""Experiment harness: ingestion, runners, report emission and the CLI."""

from .config import ConfigError, ExperimentConfig, LoadConfig
from .ingest import Dataset, DatasetSeries, IngestError, ingest_dataset, read_load_csv
from .reports import emit_load_reports, emit_reports
from .runner import (
    EvaluationRow,
    ExperimentResult,
    LoadResult,
    aggregate_rows,
    classify_and_slice,
    derive_seed,
    run_experiment,
    run_multiple,
    run_rolling_load,
    run_standard,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "LoadConfig",
    "Dataset",
    "DatasetSeries",
    "IngestError",
    "ingest_dataset",
    "read_load_csv",
    "EvaluationRow",
    "ExperimentResult",
    "LoadResult",
    "run_standard",
    "run_multiple",
    "run_experiment",
    "run_rolling_load",
    "classify_and_slice",
    "aggregate_rows",
    "derive_seed",
    "emit_reports",
    "emit_load_reports",
]
