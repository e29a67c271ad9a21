import json
import sys

import numpy as np
import pandas as pd
import pytest
from typer.testing import CliRunner

from flip.cli import app, main

runner = CliRunner()

WHITE_NOISE = {
    "kind": "fma",
    "D": 3,
    "noise": {"eigenvalues": [1.0, 0.5, 0.25]},
    "operators": {},
    "truncation": 0,
}

SCALAR_MA1 = {
    "kind": "fma",
    "D": 1,
    "noise": {"eigenvalues": [1.0]},
    "operators": {"gamma_1": [[0.5]]},
    "truncation": 1,
}

FMA1 = {
    "kind": "fma",
    "D": 2,
    "noise": {"eigenvalues": [1.0, 0.5]},
    "operators": {"gamma_1": [[0.3, 0.1], [0.0, 0.2]]},
    "truncation": 1,
}

trajectory_data = "t,x1\n1,1.0\n"


def write_config(directory, name="experiment.json", **data):
    path = directory / name
    with open(path, "w") as f:
        json.dump(data, f)
    return str(path)


def test_simulate_writes_trajectory_and_sidecar(tmp_path):
    config = write_config(tmp_path, model=WHITE_NOISE, run={"n_max": 10, "seed": 4})
    out = tmp_path / "trajectory.csv"
    result = runner.invoke(app, ["simulate", "--config", config, "--out", str(out)])
    assert result.exit_code == 0

    frame = pd.read_csv(out)
    assert list(frame.columns) == ["t", "x1", "x2", "x3"]
    assert len(frame) == 10
    with open(f"{out}.meta.json") as f:
        meta = json.load(f)
    assert meta["seed"] == 4
    assert meta["n"] == 10
    assert meta["kind"] == "fma"

    again = tmp_path / "again.csv"
    runner.invoke(app, ["simulate", "--config", config, "--out", str(again)])
    assert out.read_bytes() == again.read_bytes()


def test_simulate_seed_override(tmp_path):
    config = write_config(tmp_path, model=WHITE_NOISE, run={"n_max": 5, "seed": 4})
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    runner.invoke(app, ["simulate", "--config", config, "--out", str(first)])
    runner.invoke(app, ["simulate", "--config", config, "--out", str(second), "--seed", "5"])
    assert first.read_bytes() != second.read_bytes()


def test_simulate_reconstructs_curves(tmp_path):
    config = write_config(
        tmp_path, model=WHITE_NOISE, basis={"resolution": 16}, run={"n_max": 3}
    )
    out = tmp_path / "curves.csv"
    result = runner.invoke(app, ["simulate", "--config", config, "--out", str(out), "--reconstruct"])
    assert result.exit_code == 0
    frame = pd.read_csv(out)
    assert frame.shape == (3, 17)


def test_nonstationary_model_is_a_config_error(tmp_path):
    model = {"kind": "far1", "D": 1, "noise": {"eigenvalues": [1.0]}, "operators": {"phi": [[1.2]]}}
    config = write_config(tmp_path, model=model)
    result = runner.invoke(app, ["simulate", "--config", config, "--out", str(tmp_path / "x.csv")])
    assert result.exit_code == 2
    assert "stationarity: operator norm >= 1" in result.output


def test_missing_config_file(tmp_path):
    result = runner.invoke(app, ["validate", "--config", str(tmp_path / "missing.json")])
    assert result.exit_code == 2


def test_predict_scalar_ma1(tmp_path):
    config = write_config(tmp_path, model=SCALAR_MA1, run={"n_max": 10})
    trajectory = tmp_path / "trajectory.csv"
    trajectory.write_text(trajectory_data)
    out = tmp_path / "predictions.csv"

    result = runner.invoke(app, ["predict", str(trajectory), "--config", config, "--out", str(out)])
    assert result.exit_code == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["n", "x1", "innovation_norm"]
    assert frame["x1"].tolist() == pytest.approx([0.0, 0.4])
    assert frame["innovation_norm"][0] == pytest.approx(1.0)
    assert np.isnan(frame["innovation_norm"][1])


def test_predict_white_noise_is_zero(tmp_path):
    config = write_config(tmp_path, model=WHITE_NOISE, run={"n_max": 20, "seed": 2})
    trajectory = tmp_path / "trajectory.csv"
    runner.invoke(app, ["simulate", "--config", config, "--out", str(trajectory)])
    out = tmp_path / "predictions.csv"

    result = runner.invoke(app, ["predict", str(trajectory), "--config", config, "--out", str(out)])
    assert result.exit_code == 0
    frame = pd.read_csv(out)
    assert len(frame) == 21
    assert not frame[["x1", "x2", "x3"]].to_numpy().any()


def test_predict_constant_schedule_matches_fixed(tmp_path):
    fixed = write_config(tmp_path, "fixed.json", model=FMA1, run={"n_max": 15, "seed": 3})
    increasing = write_config(
        tmp_path,
        "increasing.json",
        model=FMA1,
        algorithm={"kind": "increasing", "schedule": "constant"},
        run={"n_max": 15, "seed": 3},
    )
    trajectory = tmp_path / "trajectory.csv"
    runner.invoke(app, ["simulate", "--config", fixed, "--out", str(trajectory)])

    outputs = []
    for config in (fixed, increasing):
        out = tmp_path / f"{len(outputs)}.csv"
        result = runner.invoke(app, ["predict", str(trajectory), "--config", config, "--out", str(out)])
        assert result.exit_code == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_predict_increasing_leaves_unused_coordinates_empty(tmp_path):
    config = write_config(
        tmp_path,
        model=WHITE_NOISE,
        basis={"kind": "covariance-eigenbasis"},
        algorithm={"kind": "increasing", "schedule": "floor-log"},
        run={"n_max": 6, "seed": 1},
    )
    trajectory = tmp_path / "trajectory.csv"
    runner.invoke(app, ["simulate", "--config", config, "--out", str(trajectory)])
    out = tmp_path / "predictions.csv"
    result = runner.invoke(app, ["predict", str(trajectory), "--config", config, "--out", str(out)])
    assert result.exit_code == 0
    frame = pd.read_csv(out)
    assert frame["x2"].isna().tolist() == [True, False, False, False, False, False, False]
    assert frame["x3"].isna().tolist() == [True, True, True, False, False, False, False]


def test_predict_fma_algorithm(tmp_path):
    config = write_config(tmp_path, model=FMA1, algorithm={"kind": "fma"}, run={"n_max": 8})
    trajectory = tmp_path / "trajectory.csv"
    runner.invoke(app, ["simulate", "--config", config, "--out", str(trajectory)])
    result = runner.invoke(
        app, ["predict", str(trajectory), "--config", config, "--out", str(tmp_path / "p.csv")]
    )
    assert result.exit_code == 0


def test_predict_dump_state(tmp_path):
    config = write_config(tmp_path, model=SCALAR_MA1, run={"n_max": 10})
    trajectory = tmp_path / "trajectory.csv"
    trajectory.write_text(trajectory_data)
    state = tmp_path / "state.json"
    result = runner.invoke(
        app,
        [
            "predict",
            str(trajectory),
            "--config",
            config,
            "--out",
            str(tmp_path / "p.csv"),
            "--dump-state",
            str(state),
        ],
    )
    assert result.exit_code == 0
    with open(state) as f:
        dumped = json.load(f)
    assert dumped["kind"] == "fixed"
    assert dumped["n_max"] == 1


def test_predict_singular_covariance_exits_3(tmp_path):
    config = write_config(tmp_path, model=FMA1, run={"n_max": 5, "pivot_tol": 0.9})
    trajectory = tmp_path / "trajectory.csv"
    trajectory.write_text("t,x1,x2\n1,1.0,0.5\n2,0.2,0.1\n")
    result = runner.invoke(
        app, ["predict", str(trajectory), "--config", config, "--out", str(tmp_path / "p.csv")]
    )
    assert result.exit_code == 3
    assert "numerical failure" in result.output


def test_predict_wrong_dimension(tmp_path):
    config = write_config(tmp_path, model=FMA1)
    trajectory = tmp_path / "trajectory.csv"
    trajectory.write_text(trajectory_data)
    result = runner.invoke(
        app, ["predict", str(trajectory), "--config", config, "--out", str(tmp_path / "p.csv")]
    )
    assert result.exit_code == 2


def test_study_white_noise(tmp_path):
    config = write_config(
        tmp_path,
        model=WHITE_NOISE,
        basis={"kind": "covariance-eigenbasis"},
        run={"n_max": 10, "mc_runs": 100, "seed": 1},
        study={"n_grid": [1, 5], "D_grid": [1, 2, 3]},
    )
    report_dir = tmp_path / "reports"
    result = runner.invoke(app, ["study", "--config", config, "--report-dir", str(report_dir)])
    assert result.exit_code == 0

    decomposition = pd.read_csv(report_dir / "decomposition.csv")
    tails = decomposition.groupby("D")["tail_sum"].first()
    assert tails.tolist() == pytest.approx([0.75, 0.25, 0.0], abs=1e-12)
    assert not (report_dir / "rates.csv").exists()
    lemmas = pd.read_csv(report_dir / "lemmas.csv")
    assert (lemmas["positive_density_ok"] == "pass").all()


def test_study_boundary_model_reports_failure(tmp_path):
    model = {**SCALAR_MA1, "operators": {"gamma_1": [[1.0]]}}
    config = write_config(
        tmp_path, model=model, run={"mc_runs": 0}, study={"n_grid": [5], "lemma_n": 5, "H": 3}
    )
    report_dir = tmp_path / "reports"
    result = runner.invoke(app, ["study", "--config", config, "--report-dir", str(report_dir)])
    assert result.exit_code == 0
    lemmas = pd.read_csv(report_dir / "lemmas.csv")
    assert lemmas["positive_density_ok"].tolist() == ["fail"]


def test_study_decomposition_and_rates(tmp_path):
    config = write_config(
        tmp_path,
        model=FMA1,
        run={"mc_runs": 0},
        study={"n_grid": [1, 5, 10], "D_grid": [1, 2]},
    )
    report_dir = tmp_path / "reports"
    result = runner.invoke(app, ["study", "--config", config, "--report-dir", str(report_dir)])
    assert result.exit_code == 0

    decomposition = pd.read_csv(report_dir / "decomposition.csv")
    for _, group in decomposition.groupby("D"):
        v = group.sort_values("n")["v_nuclear"].to_numpy()
        assert np.all(np.diff(v) <= 1e-9)
    rates = pd.read_csv(report_dir / "rates.csv")
    assert rates["n"].tolist() == [5, 10]
    assert (rates["bound"] > 0).all()


def test_study_table_format(tmp_path):
    config = write_config(
        tmp_path, model=SCALAR_MA1, run={"mc_runs": 0}, study={"n_grid": [2, 4], "lemma_n": 4}
    )
    result = runner.invoke(app, ["study", "--config", config, "--format", "table"])
    assert result.exit_code == 0
    assert "decomposition" in result.output
    assert "lemmas" in result.output


def test_study_rejects_unknown_format(tmp_path):
    config = write_config(tmp_path, model=SCALAR_MA1)
    result = runner.invoke(app, ["study", "--config", config, "--format", "xml"])
    assert result.exit_code == 2


def test_validate(tmp_path):
    config = write_config(tmp_path, model=FMA1, algorithm={"kind": "fma"})
    result = runner.invoke(app, ["validate", "--config", config])
    assert result.exit_code == 0
    assert "is valid" in result.output


def test_validate_rejects_fma_on_far1(tmp_path):
    model = {"kind": "far1", "D": 1, "noise": {"eigenvalues": [1.0]}, "operators": {"phi": [[0.5]]}}
    config = write_config(tmp_path, model=model, algorithm={"kind": "fma"})
    result = runner.invoke(app, ["validate", "--config", config])
    assert result.exit_code == 2


def test_usage_error_exits_1(monkeypatch):
    monkeypatch.setattr(sys, "argv", ["flip", "simulate"])
    with pytest.raises(SystemExit) as info:
        main()
    assert info.value.code == 1


def test_study_skips_rate_rows_without_lag_room(tmp_path):
    config = write_config(
        tmp_path, model=SCALAR_MA1, run={"mc_runs": 0}, study={"n_grid": [2, 4], "lemma_n": 4}
    )
    report_dir = tmp_path / "reports"
    result = runner.invoke(app, ["study", "--config", config, "--report-dir", str(report_dir)])
    assert result.exit_code == 0
    rates = pd.read_csv(report_dir / "rates.csv")
    assert rates["n"].tolist() == [4]
    assert rates["m_n"].tolist() == [2]
    assert (report_dir / "decomposition.csv").exists()
    assert (report_dir / "lemmas.csv").exists()


def test_study_reruns_are_byte_identical(tmp_path, monkeypatch):
    config = write_config(
        tmp_path,
        model=FMA1,
        run={"mc_runs": 50, "seed": 3},
        study={"n_grid": [5, 10], "D_grid": [1, 2], "lemma_n": 5},
    )
    outputs = []
    for threads in ("1", "2"):
        monkeypatch.setenv("FLIP_THREADS", threads)
        report_dir = tmp_path / f"reports{threads}"
        result = runner.invoke(app, ["study", "--config", config, "--report-dir", str(report_dir)])
        assert result.exit_code == 0
        outputs.append(
            {name: (report_dir / f"{name}.csv").read_bytes() for name in ("decomposition", "rates", "lemmas")}
        )
    assert outputs[0] == outputs[1]
