import logging

import pandas as pd
import pytest
from typer.testing import CliRunner

from rtann.dataset.models import SynthSpec
from rtann.dataset.services import synthesize, write_csv
from rtann.main import app

runner = CliRunner()

QUICK = ["--max-epochs", "100"]


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    # basicConfig in the callback binds the runner's captured stderr
    logging.getLogger().handlers.clear()


@pytest.fixture
def data_file(tmp_path):
    ds = synthesize(
        SynthSpec(generator="friedman-like", n=60, noise_sd=1, seed=7)
    )
    return write_csv(ds, tmp_path / "data.csv")


def _train(data_file, model_path, kind="hybrid", *extra):
    return runner.invoke(
        app,
        [
            "train",
            "--data", str(data_file),
            "--target", "y",
            "--kind", kind,
            "--model-out", str(model_path),
            *QUICK,
            *extra,
        ],
    )


def test_synth_writes_dataset(tmp_path):
    path = tmp_path / "steps.csv"

    result = runner.invoke(
        app, ["synth", "--output", str(path), "--n", "30", "--seed", "2"]
    )

    assert result.exit_code == 0, result.output
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["x1", "x2", "y"]
    assert len(frame) == 30


def test_synth_unknown_generator(tmp_path):
    result = runner.invoke(
        app,
        ["synth", "--output", str(tmp_path / "x.csv"), "--generator", "no"],
    )
    assert result.exit_code == 1
    assert "error:" in result.output


def test_train_writes_model_and_report(tmp_path, data_file):
    report = tmp_path / "report.txt"

    result = _train(
        data_file,
        tmp_path / "model.json",
        "hybrid",
        "--report-out", str(report),
        "--test-fraction", "0.3",
    )

    assert result.exit_code == 0, result.output
    text = report.read_text()
    assert text.startswith("model: hybrid\ntraining rows: 42\n")
    assert "selected features:" in text
    assert "in-sample" in text and "holdout" in text


def test_hybrid_report_puts_first_axis_on_top(tmp_path):
    data = tmp_path / "steps.csv"
    report = tmp_path / "report.txt"
    runner.invoke(app, ["synth", "--output", str(data), "--seed", "3"])

    result = _train(
        data, tmp_path / "m.json", "hybrid", "--report-out", str(report)
    )

    assert result.exit_code == 0, result.output
    assert "selected features:\n  x1 " in report.read_text()


def test_training_twice_gives_identical_files(tmp_path, data_file):
    first, second = tmp_path / "a.json", tmp_path / "b.json"

    assert _train(data_file, first).exit_code == 0
    assert _train(data_file, second).exit_code == 0

    assert first.read_bytes() == second.read_bytes()


def test_unknown_kind_is_a_usage_error(tmp_path, data_file):
    result = _train(data_file, tmp_path / "m.json", "forest")

    assert result.exit_code == 2
    assert not (tmp_path / "m.json").exists()


def test_bad_data_exits_with_one_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,y\n1,2\nx,3\n")

    result = _train(path, tmp_path / "m.json", "ols")

    assert result.exit_code == 1
    assert "error:" in result.output
    assert "row 2, column 1" in result.output


def test_predict_matches_columns_by_name(tmp_path, data_file):
    model = tmp_path / "model.json"
    assert _train(data_file, model, "tree").exit_code == 0
    frame = pd.read_csv(data_file)
    shuffled = tmp_path / "shuffled.csv"
    frame[["x5", "x3", "x1", "x4", "x2"]].to_csv(shuffled, index=False)

    outputs = []
    for path in (data_file, shuffled):
        output = tmp_path / f"pred_{path.stem}.csv"
        result = runner.invoke(
            app,
            [
                "predict",
                "--model", str(model),
                "--data", str(path),
                "--output", str(output),
            ],
        )
        assert result.exit_code == 0, result.output
        outputs.append(output.read_text())

    assert outputs[0] == outputs[1]
    assert outputs[0].startswith("prediction\n")
    assert len(outputs[0].splitlines()) == 61


def test_predict_header_only_file(tmp_path, data_file):
    model = tmp_path / "model.json"
    assert _train(data_file, model, "ols").exit_code == 0
    empty = tmp_path / "empty.csv"
    empty.write_text("x1,x2,x3,x4,x5\n")
    output = tmp_path / "pred.csv"

    result = runner.invoke(
        app,
        [
            "predict",
            "--model", str(model),
            "--data", str(empty),
            "--output", str(output),
        ],
    )

    assert result.exit_code == 0, result.output
    assert output.read_text() == "prediction\n"


def test_predict_names_missing_column(tmp_path, data_file):
    model = tmp_path / "model.json"
    assert _train(data_file, model, "ols").exit_code == 0
    partial = tmp_path / "partial.csv"
    partial.write_text("x1,x2,x3,x4\n1,2,3,4\n")

    result = runner.invoke(
        app, ["predict", "--model", str(model), "--data", str(partial)]
    )

    assert result.exit_code == 1
    assert "x5" in result.output


def test_evaluate_writes_one_row(tmp_path, data_file):
    model = tmp_path / "model.json"
    assert _train(data_file, model, "pls").exit_code == 0
    table = tmp_path / "table.csv"

    result = runner.invoke(
        app,
        [
            "evaluate",
            "--model", str(model),
            "--data", str(data_file),
            "--output", str(table),
        ],
    )

    assert result.exit_code == 0, result.output
    lines = table.read_text().splitlines()
    assert lines[0] == "model,mae,rmse,mape,r2,adj_r2"
    assert lines[1].startswith("pls,")
    assert "Adj(R²)" in result.output


def test_benchmark_writes_both_tables(tmp_path, data_file):
    out = tmp_path / "bench"

    result = runner.invoke(
        app,
        [
            "benchmark",
            "--data", str(data_file),
            "--target", "y",
            "--output-dir", str(out),
            *QUICK,
        ],
    )

    assert result.exit_code == 0, result.output
    assert "Held-out (holdout of 18 rows)" in result.output
    assert "MARS" in result.output
    for name in ("in_sample.csv", "holdout.csv"):
        assert len((out / name).read_text().splitlines()) == 7


def test_benchmark_rejects_two_protocols(data_file):
    result = runner.invoke(
        app,
        [
            "benchmark",
            "--data", str(data_file),
            "--target", "y",
            "--test-fraction", "0.3",
            "--folds", "3",
        ],
    )
    assert result.exit_code == 2


def test_sweep_rejects_unsorted_sizes(tmp_path):
    result = runner.invoke(
        app,
        ["sweep", "--output", str(tmp_path / "s.csv"), "--sizes", "80,40"],
    )
    assert result.exit_code == 2


def test_sweep_with_one_size(tmp_path):
    output = tmp_path / "s.csv"

    result = runner.invoke(
        app,
        [
            "sweep",
            "--output", str(output),
            "--sizes", "50",
            "--repeats", "2",
            "--workers", "1",
        ],
    )

    assert result.exit_code == 0, result.output
    assert "verdict: insufficient points" in result.output
    assert len(output.read_text().splitlines()) == 3


def test_config_file_supplies_defaults(tmp_path, data_file):
    settings = tmp_path / "rtann.conf"
    settings.write_text("# quick network\nmax-epochs = 5\npatience=100\n")
    report = tmp_path / "report.txt"

    result = runner.invoke(
        app,
        [
            "--config", str(settings),
            "train",
            "--data", str(data_file),
            "--target", "y",
            "--kind", "mlp",
            "--model-out", str(tmp_path / "m.json"),
            "--report-out", str(report),
        ],
    )

    assert result.exit_code == 0, result.output
    assert "epochs: 5\n" in report.read_text()


def test_command_line_beats_config_file(tmp_path, data_file):
    settings = tmp_path / "rtann.conf"
    settings.write_text("max_epochs=5\n")
    report = tmp_path / "report.txt"

    result = runner.invoke(
        app,
        [
            "--config", str(settings),
            "train",
            "--data", str(data_file),
            "--target", "y",
            "--kind", "mlp",
            "--model-out", str(tmp_path / "m.json"),
            "--report-out", str(report),
            "--max-epochs", "3",
        ],
    )

    assert result.exit_code == 0, result.output
    assert "epochs: 3\n" in report.read_text()


def test_broken_config_file(tmp_path):
    settings = tmp_path / "rtann.conf"
    settings.write_text("seed\n")

    result = runner.invoke(
        app, ["--config", str(settings), "synth", "--output", "x.csv"]
    )

    assert result.exit_code == 1
    assert "expected key=value" in result.output
