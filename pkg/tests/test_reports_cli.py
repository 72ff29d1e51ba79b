import csv
import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from subseasonal.datasets import (
    quarterly_demo_dataset,
    synthetic_load_values,
    write_dataset_json,
    write_load_csv,
)
from subseasonal.harness import ExperimentConfig, ingest_dataset, run_experiment
from subseasonal.harness.cli import main
from subseasonal.harness.reports import emit_reports


@pytest.fixture(scope="module")
def demo_json(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "demo.json"
    write_dataset_json(path, quarterly_demo_dataset(n_series=4))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def sha(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_cli(args):
    return main([str(a) for a in args])


def test_emit_reports_files_and_layout(tmp_path, demo_json):
    dataset = ingest_dataset(demo_json)
    config = ExperimentConfig(method="multiple", model="snaive", paths=120, seed=3)
    result = run_experiment(dataset, config)
    files = emit_reports(result, tmp_path, {"seed": 3})
    names = {f.name for f in files}
    assert {"per_series_standard.csv", "per_series_multiple.csv",
            "aggregate_standard.csv", "aggregate_multiple.csv",
            "dm_summary.csv", "plot_data.csv", "run_metadata.json",
            "mase_by_horizon.png", "metrics_by_bucket.png"} <= names

    agg = read_csv(tmp_path / "aggregate_multiple.csv")
    assert agg[0] == ["metric", "h1", "h1-3", "h4-6", "h7-8", "h1-8", "n_series"]
    assert [row[0] for row in agg[1:]] == ["mase", "amse", "msis"]

    plot = read_csv(tmp_path / "plot_data.csv")
    assert plot[0] == ["horizon", "mase_standard", "mase_multiple"]
    assert len(plot) - 1 == 8  # exactly `horizon` rows

    dm = read_csv(tmp_path / "dm_summary.csv")
    assert dm[0] == ["bucket", "n_tested", "n_no_decision", "pct_better", "pct_worse"]
    assert [row[0] for row in dm[1:]] == ["h1-3", "h4-6", "h7-8", "h1-8"]  # no single-step bucket


def test_aggregate_recomputable_from_per_series_file(tmp_path, demo_json):
    dataset = ingest_dataset(demo_json)
    config = ExperimentConfig(method="standard", model="snaive", paths=120, seed=3)
    result = run_experiment(dataset, config)
    emit_reports(result, tmp_path, {}, figures=False)
    per_series = read_csv(tmp_path / "per_series_standard.csv")
    header = per_series[0]
    agg = read_csv(tmp_path / "aggregate_standard.csv")
    for row in agg[1:]:
        metric = row[0]
        for j, bucket in enumerate(agg[0][1:-1], start=1):
            col = header.index(f"{metric}_{bucket}")
            values = [float(r[col]) for r in per_series[1:] if r[col] != ""]
            assert float(row[j]) == pytest.approx(np.mean(values), abs=1e-12)


def test_per_series_files_identical_for_m1_dataset(tmp_path):
    rng = np.random.default_rng(0)
    doc = {"frequency_class": "quarterly", "series": []}
    for i in range(3):
        y = 30 + np.cumsum(rng.normal(0.2, 1.0, 30))
        doc["series"].append({
            "id": f"m1-{i}",
            "frequency": 1,
            "horizon": 8,
            "train": list(y[:22]),
            "test": list(y[22:]),
        })
    path = tmp_path / "m1.json"
    write_dataset_json(path, doc)
    dataset = ingest_dataset(path)
    config = ExperimentConfig(method="multiple", model="ets", paths=150, seed=42)
    result = run_experiment(dataset, config)
    out = tmp_path / "out"
    emit_reports(result, out, {}, figures=False)
    assert sha(out / "per_series_standard.csv") == sha(out / "per_series_multiple.csv")
    assert sha(out / "aggregate_standard.csv") == sha(out / "aggregate_multiple.csv")


def test_cli_count():
    assert run_cli(["count", "--m", "4", "--h", "8"]) == 0
    assert run_cli(["count", "--m", "0", "--h", "8"]) == 1


def test_cli_count_prints_value(capsys):
    run_cli(["count", "--m", "12", "--h", "1"])
    assert capsys.readouterr().out.strip() == "67"


def test_cli_run_and_determinism(tmp_path, demo_json):
    out = tmp_path / "a"
    names = ("per_series_standard.csv", "per_series_multiple.csv",
             "aggregate_standard.csv", "aggregate_multiple.csv",
             "dm_summary.csv", "plot_data.csv", "run_metadata.json",
             "figures/mase_by_horizon.png", "figures/metrics_by_bucket.png")
    base = ["run", "--data", demo_json, "--method", "multiple", "--model", "snaive",
            "--paths", "120", "--seed", "7", "--out", out]
    assert run_cli(base) == 0
    first = {name: sha(out / name) for name in names}
    assert run_cli(base) == 0  # identical config incl. output dir
    for name in names:
        assert sha(out / name) == first[name], name


def test_cli_exit_codes(tmp_path, demo_json):
    # config errors -> 1
    assert run_cli(["run", "--data", demo_json, "--out", tmp_path / "x",
                    "--pi", "1.5"]) == 1
    assert run_cli(["run", "--data", demo_json, "--out", tmp_path / "x",
                    "--paths", "10"]) == 1
    assert run_cli(["run", "--data", demo_json]) == 1  # no --out and no env var
    assert run_cli(["run", "--data", demo_json, "--bogus-flag", "1"]) == 1
    # I/O errors -> 2
    assert run_cli(["run", "--data", tmp_path / "missing.json",
                    "--out", tmp_path / "x"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run_cli(["run", "--data", bad, "--out", tmp_path / "x"]) == 2


def test_cli_env_var_overrides(tmp_path, demo_json, monkeypatch):
    out = tmp_path / "env-out"
    monkeypatch.setenv("SUBSEASONAL_OUT", str(out))
    monkeypatch.setenv("SUBSEASONAL_WORKERS", "2")
    assert run_cli(["run", "--data", demo_json, "--method", "standard",
                    "--model", "snaive", "--paths", "120", "--seed", "1",
                    "--no-figures"]) == 0
    meta = json.loads((out / "run_metadata.json").read_text())
    assert meta["config"]["workers"] == 2
    assert meta["config"]["out"] == str(out)


def test_cli_category_filter(tmp_path):
    path = tmp_path / "cats.json"
    write_dataset_json(path, quarterly_demo_dataset(n_series=6))
    out = tmp_path / "cat-out"
    assert run_cli(["run", "--data", path, "--method", "standard", "--model", "snaive",
                    "--paths", "120", "--seed", "1", "--category", "industry",
                    "--out", out, "--no-figures"]) == 0
    rows = read_csv(out / "per_series_standard.csv")
    assert all(row[1] == "industry" for row in rows[1:])
    assert len(rows) - 1 == 3


def test_cli_ids_filter(tmp_path, demo_json):
    ids_file = tmp_path / "ids.txt"
    ids_file.write_text("q01\nq03\n", encoding="utf-8")
    out = tmp_path / "ids-out"
    assert run_cli(["run", "--data", demo_json, "--method", "standard", "--model", "snaive",
                    "--paths", "120", "--seed", "1", "--ids", ids_file,
                    "--out", out, "--no-figures"]) == 0
    rows = read_csv(out / "per_series_standard.csv")
    assert [row[0] for row in rows[1:]] == ["q01", "q03"]


def test_cli_verbose_emits_level_diagnostics(tmp_path, demo_json):
    out = tmp_path / "verbose-out"
    assert run_cli(["run", "--data", demo_json, "--method", "multiple", "--model", "snaive",
                    "--paths", "120", "--seed", "1", "--verbose",
                    "--out", out, "--no-figures"]) == 0
    rows = read_csv(out / "levels_multiple.csv")
    assert rows[0] == ["id", "width", "step", "mean_point"]
    widths = {row[1] for row in rows[1:]}
    assert widths == {"1", "2", "3", "4"}


@pytest.fixture(scope="module")
def small_load_csv(tmp_path_factory):
    # 5 weeks: enough for a couple of origins at a 4-week training window
    path = tmp_path_factory.mktemp("load") / "load.csv"
    write_load_csv(path, synthetic_load_values(weeks=5, seed=3))
    return path


def test_cli_load_eval_standard(tmp_path, small_load_csv):
    out = tmp_path / "load-std"
    code = run_cli(["load-eval", "--csv", small_load_csv, "--periods", "24,168",
                    "--train", str(4 * 168), "--horizon", "24", "--step", "24",
                    "--method", "standard", "--seed", "1", "--out", out])
    assert code == 0
    plot = read_csv(out / "plot_data.csv")
    assert plot[0] == ["horizon", "mase_standard"]
    assert len(plot) - 1 == 24
    origins = read_csv(out / "per_origin_standard.csv")
    assert len(origins) - 1 == 7  # (5-4) weeks of daily origins
    assert (out / "figures" / "mase_by_horizon.png").exists()


def test_cli_load_eval_bad_periods(tmp_path, small_load_csv):
    assert run_cli(["load-eval", "--csv", small_load_csv, "--periods", "24,100",
                    "--train", "672", "--out", tmp_path / "x"]) == 1
    assert run_cli(["load-eval", "--csv", tmp_path / "nope.csv",
                    "--out", tmp_path / "x"]) == 2
