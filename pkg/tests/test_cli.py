"""Tests for the gpdd command line."""
import json

import numpy as np
import pandas as pd
import pytest

from src.config.config import CSV_HEADER
from src.harness.cli import exit_code_for, main
from src.utils.errors import ConfigError, FactorizationFailure, NoOptimalLambda


def write_config(tmp_path, **overrides):
    raw = {
        "name": "cli",
        "kernel": {"family": "linear"},
        "metric": "free-energy",
        "n": 40,
        "c_grid": [0.5, 1.5],
        "gamma": [0.5],
        "lambda_policy": {"kind": "fixed", "value": 1.0},
        "reps": 3,
        "seed": 5,
    }
    raw.update(overrides)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(raw))
    return str(path)


def write_dataset(tmp_path, rng, name="data.csv"):
    frame = pd.DataFrame(rng.standard_normal((50, 4)) * [1.0, 3.0, 0.5, 2.0] + 1.0, columns=["a", "b", "c", "d"])
    frame["y"] = rng.standard_normal(50)
    path = tmp_path / name
    frame.to_csv(path, index=False)
    return str(path)


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
    assert "sweep" in capsys.readouterr().out


def test_parse_errors_are_usage_errors():
    assert main([]) == 2
    assert main(["optimal", "lambda", "--kernel", "nonsense", "--c", "1", "--gamma", "0.5"]) == 2
    assert main(["optimal", "lambda", "--kernel", "linear", "--c", "-1", "--gamma", "0.5"]) == 2


def test_optimal_lambda(capsys):
    assert main(["optimal", "lambda", "--kernel", "linear", "--c", "1", "--gamma", "0.5"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(8.0 / 3.0, rel=1e-12)


def test_optimal_lambda_missing_is_numerical(capsys):
    assert main(["optimal", "lambda", "--kernel", "linear", "--c", "1", "--gamma", "1"]) == 3
    assert capsys.readouterr().out.startswith("error: NoOptimalLambda")


def test_optimal_gamma(capsys):
    assert main(["optimal", "gamma", "--kernel", "linear", "--c", "1", "--mu", "1"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx((np.sqrt(5.0) - 1.0) / 2.0, rel=1e-10)
    assert main(["optimal", "gamma", "--kernel", "linear", "--c", "1", "--gamma", "0.1"]) == 2


def test_sweep_writes_csv_and_svg(tmp_path, capsys):
    out, plot = tmp_path / "out.csv", tmp_path / "out.svg"
    code = main(["--workers", "1", "sweep", "--config", write_config(tmp_path),
                 "--out", str(out), "--plot", str(plot), "--x", "c"])
    assert code == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == CSV_HEADER
    assert frame["d"].tolist() == [20, 60]
    assert 'id="series-0"' in plot.read_text()
    assert "2 grid point(s)" in capsys.readouterr().out


def test_sweep_config_errors(tmp_path, capsys):
    bad = write_config(tmp_path, reps=1)
    assert main(["sweep", "--config", bad, "--out", str(tmp_path / "o.csv")]) == 2
    assert "config.reps" in capsys.readouterr().out
    assert main(["sweep", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path / "o.csv")]) == 2


def test_compare(tmp_path, capsys):
    out = tmp_path / "compare.csv"
    assert main(["--workers", "1", "compare", "--config", write_config(tmp_path), "--out", str(out)]) == 0
    frame = pd.read_csv(out, float_precision="round_trip")
    assert len(frame) == 2
    np.testing.assert_allclose(frame["abs_dev"], (frame["empirical"] - frame["limit"]).abs(), rtol=1e-12, atol=1e-15)
    assert capsys.readouterr().out.startswith("max |empirical - limit|")


def test_label_variance(tmp_path):
    out = tmp_path / "lv.csv"
    code = main(["--workers", "1", "label-variance", "--config", write_config(tmp_path),
                 "--out", str(out), "--variances", "0.5", "2"])
    assert code == 0
    frame = pd.read_csv(out)
    assert sorted(set(frame["sigma2"])) == [0.5, 2.0]
    assert len(frame) == 4


def test_limits(tmp_path):
    out = tmp_path / "limits.csv"
    code = main(["limits", "--kernel", "gaussian", "--c-min", "0.1", "--c-max", "4", "--points", "8",
                 "--gamma", "0.1", "--optimal-lambda", "--out", str(out)])
    assert code == 0
    frame = pd.read_csv(out, keep_default_na=False)
    assert len(frame) == 8
    assert list(frame.columns) == ["c", "gamma", "lambda", "alpha", "beta", "free_energy", "error"]
    assert (frame["error"] == "").all()

    code = main(["limits", "--kernel", "linear", "--c-min", "2", "--c-max", "1", "--points", "3",
                 "--gamma", "0.1", "--lambda", "1", "--out", str(out)])
    assert code == 2


def test_whiten_and_augment(tmp_path, rng):
    source = write_dataset(tmp_path, rng)
    whitened = tmp_path / "white.csv"
    assert main(["whiten", "--input", source, "--label", "y", "--output", str(whitened)]) == 0
    frame = pd.read_csv(whitened)
    X = frame.drop(columns="y").to_numpy()
    np.testing.assert_allclose(X.mean(axis=0), 0.0, atol=1e-10)
    np.testing.assert_allclose(X.T @ X / len(X), np.eye(4), atol=1e-8)

    augmented = tmp_path / "aug.csv"
    code = main(["augment", "--input", str(whitened), "--mode", "copied", "--target-d", "6",
                 "--seed", "9", "--output", str(augmented)])
    assert code == 0
    frame = pd.read_csv(augmented)
    assert frame.shape == (50, 7)
    np.testing.assert_array_equal(frame.iloc[:, 4], frame.iloc[:, 0])


def test_whiten_reports_bad_input(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,y\n1,2,3\n4,oops,6\n")
    assert main(["whiten", "--input", str(path), "--label", "y", "--output", str(tmp_path / "o.csv")]) == 2
    assert "line 3" in capsys.readouterr().out


def test_validate_quick_suite(capsys):
    assert main(["validate", "--suite", "specfun", "--quick"]) == 0
    assert capsys.readouterr().out.strip().endswith("checks passed")


def test_cvcheck(capsys):
    assert main(["cvcheck", "--n", "4", "--kernel", "gaussian", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "S_4 = " in out and "F_n" in out
    assert main(["cvcheck", "--n", "7", "--kernel", "gaussian", "--seed", "3"]) == 2


def test_exit_code_mapping():
    assert exit_code_for(NoOptimalLambda(1.0, 0.0)) == 3
    assert exit_code_for(FactorizationFailure("not PD")) == 3
    assert exit_code_for(ConfigError("bad")) == 2
    assert exit_code_for(OSError("disk")) == 2
