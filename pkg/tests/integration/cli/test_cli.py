"""End-to-end runs of the `adialin` command line through main()."""
import json

import numpy as np
import pytest

from commands.options import build_noise
from core.config import settings
from main import main
from models.enums import NoiseModel
from schemas.instances import LinearSystemInstance
from services.problems import ProblemService


@pytest.fixture
def identity_file(tmp_path, identity_instance):
    return ProblemService.save_instance(identity_instance, tmp_path / "identity.json")


@pytest.fixture
def stiff_file(tmp_path):
    """One large step leaves a residual of about 0.2 in the second half."""
    instance = LinearSystemInstance(
        dim=2, kappa=10.0, seed=0,
        A=np.diag([1.0, 0.1]), b=np.array([1.0, 1.0]) / np.sqrt(2),
    )
    return ProblemService.save_instance(instance, tmp_path / "stiff.json")


# --- solve ---

def test_solve_prints_fidelity(identity_file, capsys):
    code = main(["solve", "--instance", str(identity_file), "--steps", "10"])
    out = capsys.readouterr().out

    assert code == 0
    assert "fidelity: 1.000000" in out
    assert "truncation_accepted: true" in out
    assert "segment_depth: 20" in out


def test_solve_writes_json(identity_file, tmp_path, capsys):
    out_path = tmp_path / "result.json"
    code = main(["solve", "--instance", str(identity_file), "--steps", "10", "--out", str(out_path)])
    payload = json.loads(out_path.read_text())

    assert code == 0
    assert payload["status"] == "ok"
    assert payload["result"]["truncation_accepted"] is True
    assert payload["depth"]["conventional_total"] == 200


def test_solve_asks_for_longer_schedule(stiff_file, capsys):
    code = main(["solve", "--instance", str(stiff_file), "--steps", "1", "--dt", "0.45"])
    err = capsys.readouterr().err

    assert code == 3
    assert "modify T, dt" in err
    assert "--steps 2" in err


def test_solve_with_noise_and_circuit_engine(capsys):
    code = main([
        "solve", "--dim", "2", "--kappa", "5", "--steps", "20",
        "--noise-model", "measurement_gaussian", "--noise-strength", "0.001", "--engine", "circuit",
    ])
    assert code in (0, 3)
    assert "fidelity_before_truncation" in capsys.readouterr().out


def test_solve_rejects_bad_dimension(capsys):
    code = main(["solve", "--dim", "3"])
    assert code == 1
    assert "error: dim must be a power of two" in capsys.readouterr().err


def test_solve_rejects_zero_steps(capsys):
    code = main(["solve", "--steps", "0"])
    assert code == 1
    assert "error: invalid steps" in capsys.readouterr().err


def test_unknown_option_is_usage_error(capsys):
    assert main(["solve", "--bogus"]) == 2
    assert "Usage" in capsys.readouterr().err


def test_noise_strength_needs_model(capsys):
    assert main(["solve", "--noise-strength", "0.1", "--steps", "5"]) == 1


# --- other commands ---

def test_verify_encoding(capsys):
    code = main(["verify-encoding", "--n", "1", "--trials", "3"])
    assert code == 0
    assert "passed: true" in capsys.readouterr().out


def test_gap_scan_writes_csv(tmp_path, capsys):
    out_path = tmp_path / "gap.csv"
    code = main(["gap-scan", "--dim", "2", "--kappa", "10", "--grid", "21", "--out", str(out_path)])

    assert code == 0
    assert "min_gap:" in capsys.readouterr().out
    assert len(out_path.read_text().splitlines()) == 22


def test_depth_report_and_program_dump(tmp_path, capsys):
    program = tmp_path / "segment.txt"
    code = main(["depth-report", "--dim", "2", "--steps", "100", "--dump-program", str(program)])
    out = capsys.readouterr().out

    assert code == 0
    assert "segment_depth: 20" in out
    assert "conventional_total: 2000" in out
    assert len(program.read_text().splitlines()) == 22


def test_sweep_then_plot(tmp_path, capsys):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({"dims": [2], "kappas": [5.0], "steps_list": [20], "trials": 2}))
    results = tmp_path / "results.csv"

    code = main(["sweep", "--config", str(config), "--out", str(results), "--workers", "1"])
    out = capsys.readouterr().out
    assert code == 0
    assert f"wrote 2 records to {results}" in out
    assert len(results.read_text().splitlines()) == 3

    code = main(["plot", str(results)])
    out = capsys.readouterr().out
    assert code == 0
    assert "plot_fidelity.py" in out
    assert (tmp_path / "plots" / "fidelity_dim2.csv").is_file()


def test_sweep_rejects_unknown_config_field(tmp_path, capsys):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({"dims": [2], "colour": "blue"}))
    assert main(["sweep", "--config", str(config)]) == 1


def test_sweep_prints_steps_trend(tmp_path, capsys):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({"dims": [2], "kappas": [5.0], "steps_list": [20, 40], "trials": 1}))

    code = main(["sweep", "--config", str(config), "--out", str(tmp_path / "trend.csv"), "--workers", "1"])
    out = capsys.readouterr().out

    assert code == 0
    assert "trend dim=2 kappa=5 spearman=" in out


# --- shared options ---

def test_gaussian_noise_defaults_to_calibrated_sigma():
    noise = build_noise("measurement_gaussian", None, None)
    assert noise.model == NoiseModel.MEASUREMENT_GAUSSIAN
    assert noise.strength == settings.DEFAULT_NOISE_SIGMA


def test_explicit_noise_strength_wins():
    assert build_noise("measurement_gaussian", 0.001, None).strength == 0.001
    assert build_noise("depolarizing", None, None).strength == 0.0
