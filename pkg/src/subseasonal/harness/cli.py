"""Command-line interface.

Exit codes: 0 on success, 1 on configuration errors (including bad flags),
2 on I/O and input-format errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from ..subsample import count_subseries
from .config import ConfigError, ExperimentConfig, LoadConfig
from .ingest import IngestError, ingest_dataset, read_load_csv
from .reports import emit_load_reports, emit_reports
from .runner import run_experiment, run_rolling_load

__all__ = ["main", "build_parser"]

ENV_OUT = "SUBSEASONAL_OUT"
ENV_WORKERS = "SUBSEASONAL_WORKERS"


class _Parser(argparse.ArgumentParser):
    """Argument errors are configuration errors (exit 1), not usage-exit 2."""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subseasonal",
                     description="Seasonal forecasting with sub-seasonal subsampling")
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="print the number of subseries for (m, h)")
    p_count.add_argument("--m", type=int, required=True, help="seasonal frequency")
    p_count.add_argument("--h", type=int, required=True, help="forecast horizon")

    p_run = sub.add_parser("run", help="standard vs multiple evaluation on a JSON dataset")
    p_run.add_argument("--data", required=True, help="dataset JSON path")
    p_run.add_argument("--method", choices=["standard", "multiple"], default="multiple",
                       help="'multiple' runs the comparison experiment incl. the baseline")
    p_run.add_argument("--model", choices=["ets", "snaive"], default="ets")
    p_run.add_argument("--combine", choices=["pooled", "level-equal"], default="pooled")
    p_run.add_argument("--pi", type=float, default=0.95, help="prediction interval coverage")
    p_run.add_argument("--paths", type=int, default=1000, help="simulation paths for intervals")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--workers", type=int, default=None)
    p_run.add_argument("--out", default=None, help=f"output directory (or ${ENV_OUT})")
    p_run.add_argument("--category", default=None, help="restrict to one series category")
    p_run.add_argument("--ids", default=None, help="file with one series id per line")
    p_run.add_argument("--dm-loss", choices=["absolute", "squared"], default="absolute")
    p_run.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p_run.add_argument("--verbose", action="store_true",
                       help="emit per-level diagnostics alongside the reports")

    p_load = sub.add_parser("load-eval", help="rolling-origin load evaluation on an hourly CSV")
    p_load.add_argument("--csv", required=True, help="hourly 'timestamp,demand' CSV path")
    p_load.add_argument("--periods", default="24,168", help="short,long seasonal periods")
    p_load.add_argument("--train", type=int, default=1344, help="initial training hours")
    p_load.add_argument("--horizon", type=int, default=24)
    p_load.add_argument("--step", type=int, default=24)
    p_load.add_argument("--method", choices=["standard", "multiple"], default="multiple")
    p_load.add_argument("--combine", choices=["pooled", "level-equal"], default="pooled")
    p_load.add_argument("--use-ar", action="store_true",
                        help="add the AR(1) residual adjustment to the double-seasonal model")
    p_load.add_argument("--seed", type=int, default=0)
    p_load.add_argument("--workers", type=int, default=None)
    p_load.add_argument("--out", default=None, help=f"output directory (or ${ENV_OUT})")
    p_load.add_argument("--no-figures", action="store_true")
    return parser


def _resolve_out(flag: Optional[str]) -> Path:
    value = flag or os.environ.get(ENV_OUT)
    if not value:
        raise ConfigError(f"an output directory is required (--out or ${ENV_OUT})")
    return Path(value)


def _resolve_workers(flag: Optional[int]) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(ENV_WORKERS)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"${ENV_WORKERS} must be an integer, got {env!r}")
    return 1


def _cmd_count(args) -> int:
    try:
        print(count_subseries(args.m, args.h))
    except ValueError as exc:
        raise ConfigError(str(exc))
    return 0


def _cmd_run(args) -> int:
    ids = None
    if args.ids:
        ids = frozenset(
            line.strip() for line in Path(args.ids).read_text(encoding="utf-8").splitlines()
            if line.strip()
        )
    workers = _resolve_workers(args.workers)
    out = _resolve_out(args.out)
    config = ExperimentConfig(
        method=args.method,
        model=args.model,
        combine_mode=args.combine,
        pi_level=args.pi,
        paths=args.paths,
        seed=args.seed,
        workers=workers,
        category=args.category,
        ids=ids,
        verbose=args.verbose,
    )
    config.validate()
    dataset = ingest_dataset(args.data, category=args.category, ids=ids)
    if not dataset.series:
        raise ConfigError(f"no usable series in {args.data}"
                          + (f" for category {args.category!r}" if args.category else ""))
    result = run_experiment(dataset, config)
    echo = {
        "command": "run",
        "data": str(args.data),
        "method": args.method,
        "model": args.model,
        "combine": args.combine,
        "pi": args.pi,
        "paths": args.paths,
        "seed": args.seed,
        "workers": workers,
        "out": str(out),
        "category": args.category,
        "ids": str(args.ids) if args.ids else None,
        "dm_loss": args.dm_loss,
        "verbose": args.verbose,
    }
    written = emit_reports(result, out, echo, dm_loss=args.dm_loss,
                           figures=not args.no_figures)
    print(f"evaluated {len(result.outcomes)} series "
          f"({len(result.skipped)} skipped); wrote {len(written)} files to {out}")
    return 0


def _cmd_load(args) -> int:
    try:
        s1, s2 = (int(p) for p in args.periods.split(","))
    except ValueError:
        raise ConfigError(f"--periods must be 'short,long', got {args.periods!r}")
    workers = _resolve_workers(args.workers)
    out = _resolve_out(args.out)
    config = LoadConfig(
        periods=(s1, s2),
        train_length=args.train,
        horizon=args.horizon,
        step=args.step,
        method=args.method,
        combine_mode=args.combine,
        use_ar=args.use_ar,
        seed=args.seed,
        workers=workers,
    )
    config.validate()
    series = read_load_csv(args.csv, (s1, s2))
    result = run_rolling_load(series, config)
    echo = {
        "command": "load-eval",
        "csv": str(args.csv),
        "periods": [s1, s2],
        "train": args.train,
        "horizon": args.horizon,
        "step": args.step,
        "method": args.method,
        "combine": args.combine,
        "use_ar": args.use_ar,
        "seed": args.seed,
        "workers": workers,
        "out": str(out),
    }
    written = emit_load_reports(result, out, echo, figures=not args.no_figures)
    line = f"evaluated {len(result.origins)} origins"
    if "multiple" in result.methods:
        base = result.overall("standard")
        if base > 0:
            pct = 100.0 * (1.0 - result.overall("multiple") / base)
            line += f"; multiple improves on standard by {pct:.2f}% mean MASE"
    print(line + f"; wrote {len(written)} files to {out}")
    return 0


_COMMANDS = {"count": _cmd_count, "run": _cmd_run, "load-eval": _cmd_load}


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IngestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
