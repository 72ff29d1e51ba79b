"""Report emission: delimited per-series/aggregate tables, DM summaries,
plot data and rendered figures.

Every file is deterministic given (dataset, config, seed): fixed column
orders, fixed float formatting, no timestamps. Method names appear in file
names, never in file content, so a degenerate multiple run can be compared
byte-for-byte against its standard baseline.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import __version__
from ..metrics import HorizonBucket, dm_test
from .runner import EvaluationRow, ExperimentResult, LoadResult, aggregate_rows, classify_and_slice

__all__ = ["emit_reports", "emit_load_reports"]

logger = logging.getLogger(__name__)

_METRICS = ("mase", "amse", "msis")


def _fmt(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    # shortest round-trip representation: aggregates stay recomputable from
    # the emitted per-series values at full precision
    return repr(float(value))


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> Path:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _per_series_file(rows: Sequence[EvaluationRow], buckets: Sequence[HorizonBucket],
                     path: Path) -> Path:
    header = ["id", "category", "classification"]
    for metric in _METRICS:
        header.extend(f"{metric}_{bucket.label}" for bucket in buckets)
    header.append("error")
    out = []
    for row in rows:
        line = [row.series_id, row.category, row.classification]
        for metric in _METRICS:
            table = getattr(row, f"{metric}_by_bucket")
            line.extend(_fmt(table[bucket.label]) for bucket in buckets)
        line.append(row.error)
        out.append(line)
    return _write_csv(path, header, out)


def _aggregate_file(rows: Sequence[EvaluationRow], buckets: Sequence[HorizonBucket],
                    path: Path) -> Path:
    agg = aggregate_rows(rows, buckets)
    header = ["metric"] + [bucket.label for bucket in buckets] + ["n_series"]
    out = []
    for metric in _METRICS:
        table = agg[metric]
        out.append([metric] + [_fmt(table[b.label]) for b in buckets] + [str(int(table["n"]))])
    return _write_csv(path, header, out)


def _class_aggregate_file(rows: Sequence[EvaluationRow], buckets: Sequence[HorizonBucket],
                          path: Path) -> Optional[Path]:
    sliced = classify_and_slice(rows, buckets)
    if not sliced:
        return None
    header = ["class", "metric"] + [bucket.label for bucket in buckets] + ["n_series"]
    out = []
    for label, agg in sliced.items():
        for metric in _METRICS:
            table = agg[metric]
            out.append([label, metric] + [_fmt(table[b.label]) for b in buckets]
                       + [str(int(table["n"]))])
    return _write_csv(path, header, out)


def _dm_summary_file(standard: Sequence[EvaluationRow], multiple: Sequence[EvaluationRow],
                     buckets: Sequence[HorizonBucket], loss: str, path: Path) -> Path:
    """Percent of series where the pooled method tests significantly better/worse.

    Errors are compared per bucket subsequence; the single-step bucket has
    no variance estimate and is omitted. The differential lag window is 1
    (fixed-origin multi-step errors).
    """
    by_id = {row.series_id: row for row in multiple}
    header = ["bucket", "n_tested", "n_no_decision", "pct_better", "pct_worse"]
    out = []
    for bucket in buckets:
        a, b = bucket.range
        if b - a + 1 < 2:
            continue
        better = worse = tested = no_decision = 0
        for srow in standard:
            mrow = by_id.get(srow.series_id)
            if mrow is None or srow.failed or mrow.failed:
                continue
            e_std = srow.errors[a - 1:b]
            e_mult = mrow.errors[a - 1:b]
            if not (np.isfinite(e_std).all() and np.isfinite(e_mult).all()):
                continue
            result = dm_test(e_std, e_mult, h=1, loss=loss)
            tested += 1
            if result.verdict == "no_decision":
                no_decision += 1
            elif result.verdict == "b_better":
                better += 1
            elif result.verdict == "a_better":
                worse += 1
        pct_better = 100.0 * better / tested if tested else float("nan")
        pct_worse = 100.0 * worse / tested if tested else float("nan")
        out.append([bucket.label, str(tested), str(no_decision),
                    _fmt(pct_better), _fmt(pct_worse)])
    return _write_csv(path, header, out)


def _per_horizon_curve(rows: Sequence[EvaluationRow]) -> np.ndarray:
    h_max = max((row.scaled_abs_errors.shape[0] for row in rows), default=0)
    curve = np.full(h_max, np.nan)
    for t in range(h_max):
        vals = np.array([
            row.scaled_abs_errors[t]
            for row in rows
            if row.scaled_abs_errors.shape[0] > t and np.isfinite(row.scaled_abs_errors[t])
        ])
        if vals.size:
            curve[t] = vals.mean()
    return curve


def _plot_data_file(curves: Dict[str, np.ndarray], path: Path) -> Path:
    methods = [m for m in ("standard", "multiple") if m in curves]
    h_max = max((c.shape[0] for c in curves.values()), default=0)
    header = ["horizon"] + [f"mase_{m}" for m in methods]
    out = []
    for t in range(h_max):
        line = [str(t + 1)]
        for m in methods:
            c = curves[m]
            line.append(_fmt(c[t]) if t < c.shape[0] else "")
        out.append(line)
    return _write_csv(path, header, out)


def _levels_file(rows: Sequence[EvaluationRow], path: Path) -> Optional[Path]:
    out = []
    for row in rows:
        if not row.levels:
            continue
        for width in sorted(row.levels):
            means = row.levels[width]
            for t, value in enumerate(means, start=1):
                if math.isnan(value):
                    continue
                out.append([row.series_id, str(width), str(t), _fmt(value)])
    if not out:
        return None
    return _write_csv(path, ["id", "width", "step", "mean_point"], out)


def emit_reports(result: ExperimentResult, outdir: Path, config_echo: Dict,
                 dm_loss: str = "absolute", figures: bool = True) -> List[Path]:
    """Write all report files for an experiment run; returns the paths written."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    buckets = result.buckets
    written: List[Path] = []

    methods: Dict[str, Sequence[EvaluationRow]] = {"standard": result.standard_rows}
    if result.config.method == "multiple":
        methods["multiple"] = result.multiple_rows

    curves: Dict[str, np.ndarray] = {}
    for method, rows in methods.items():
        written.append(_per_series_file(rows, buckets, outdir / f"per_series_{method}.csv"))
        written.append(_aggregate_file(rows, buckets, outdir / f"aggregate_{method}.csv"))
        class_path = _class_aggregate_file(rows, buckets, outdir / f"aggregate_by_class_{method}.csv")
        if class_path:
            written.append(class_path)
        curves[method] = _per_horizon_curve(rows)

    if "multiple" in methods:
        written.append(_dm_summary_file(result.standard_rows, result.multiple_rows,
                                        buckets, dm_loss, outdir / "dm_summary.csv"))
        levels_path = _levels_file(result.multiple_rows, outdir / "levels_multiple.csv")
        if levels_path:
            written.append(levels_path)

    written.append(_plot_data_file(curves, outdir / "plot_data.csv"))

    metadata = {
        "config": config_echo,
        "frequency_class": result.frequency_class,
        "methods": sorted(methods),
        "n_series": len(result.outcomes),
        "n_skipped": len(result.skipped),
        "skipped": [list(item) for item in result.skipped],
        "version": __version__,
    }
    meta_path = outdir / "run_metadata.json"
    meta_path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(meta_path)

    if figures:
        from .figures import save_bucket_figure, save_horizon_figure

        figdir = outdir / "figures"
        figdir.mkdir(exist_ok=True)
        written.append(save_horizon_figure(curves, figdir / "mase_by_horizon.png"))
        aggregates = {m: aggregate_rows(rows, buckets) for m, rows in methods.items()}
        written.append(save_bucket_figure(aggregates, buckets, figdir / "metrics_by_bucket.png"))
    return written


def emit_load_reports(result: LoadResult, outdir: Path, config_echo: Dict,
                      figures: bool = True) -> List[Path]:
    """Write the rolling-origin load evaluation reports."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []

    curves = {method: result.curve(method) for method in result.methods}
    for method in result.methods:
        rows = [
            [str(row.origin), _fmt(float(row.scaled_abs_errors[method].mean()))]
            for row in result.origins
        ]
        written.append(_write_csv(outdir / f"per_origin_{method}.csv", ["origin", "mase"], rows))
    written.append(_plot_data_file(curves, outdir / "plot_data.csv"))

    summary: Dict[str, object] = {
        "config": config_echo,
        "n_origins": len(result.origins),
        "skipped_origins": [list(item) for item in result.skipped_origins],
        "mase_overall": {m: result.overall(m) for m in result.methods},
        "version": __version__,
    }
    if "multiple" in result.methods:
        base = result.overall("standard")
        if base > 0:
            summary["improvement_pct"] = 100.0 * (1.0 - result.overall("multiple") / base)
    meta_path = outdir / "load_metadata.json"
    meta_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(meta_path)

    if figures:
        from .figures import save_horizon_figure

        figdir = outdir / "figures"
        figdir.mkdir(exist_ok=True)
        written.append(save_horizon_figure(curves, figdir / "mase_by_horizon.png"))
    return written
