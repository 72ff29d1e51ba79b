"""Figure rendering for the report path (headless, deterministic PNG output)."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from ..metrics import HorizonBucket

__all__ = ["save_horizon_figure", "save_bucket_figure"]

_COLORS = {"standard": "#555555", "multiple": "#c44e52"}
_METRICS = ("mase", "amse", "msis")


def save_horizon_figure(curves: Dict[str, np.ndarray], path: Path) -> Path:
    """Per-horizon mean scaled absolute error, one line per method."""
    fig, ax = plt.subplots(figsize=(7, 4.2))
    for method in ("standard", "multiple"):
        if method not in curves:
            continue
        curve = curves[method]
        steps = np.arange(1, curve.shape[0] + 1)
        ax.plot(steps, curve, marker="o", markersize=3, lw=1.4,
                color=_COLORS[method], label=method)
    ax.set_xlabel("horizon step")
    ax.set_ylabel("MASE")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3, lw=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def save_bucket_figure(aggregates: Dict[str, Dict[str, Dict[str, float]]],
                       buckets: Sequence[HorizonBucket], path: Path) -> Path:
    """Grouped bars of the per-bucket aggregate metrics, one panel per metric."""
    labels = [bucket.label for bucket in buckets]
    x = np.arange(len(labels))
    methods = [m for m in ("standard", "multiple") if m in aggregates]
    width = 0.8 / max(len(methods), 1)
    fig, axes = plt.subplots(1, len(_METRICS), figsize=(11, 3.4))
    for ax, metric in zip(np.atleast_1d(axes), _METRICS):
        for i, method in enumerate(methods):
            table = aggregates[method][metric]
            values = [table[label] for label in labels]
            ax.bar(x + (i - (len(methods) - 1) / 2) * width, values, width,
                   color=_COLORS[method], label=method)
        ax.set_title(metric.upper(), fontsize=10)
        ax.set_xticks(x)
        ax.set_xticklabels(labels, rotation=45, fontsize=8)
        ax.grid(axis="y", alpha=0.3, lw=0.5)
    axes_flat = np.atleast_1d(axes)
    axes_flat[0].legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)
