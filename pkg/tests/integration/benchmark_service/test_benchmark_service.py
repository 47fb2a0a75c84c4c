import csv

import numpy as np
import pytest

from core.config import settings
from core.errors import InvalidInputError, SchemaMismatchError, VanishingPostselectionError
from models.enums import DispatchMode, NoiseModel, RunStatus
from schemas.benchmarks import BenchmarkRecord, SweepConfig
from services.benchmarks import CSV_COLUMNS, BenchmarkService, execute_trial
from services.dynamic_engine import DynamicEngineService


def _config(tmp_path, **overrides):
    values = {
        "dims": [2],
        "kappas": [5.0],
        "steps_list": [20, 40],
        "trials": 2,
        "output": tmp_path / "sweep.csv",
        "workers": 1,
    }
    values.update(overrides)
    return SweepConfig(**values)


# --- cells and seeds ---

def test_grid_has_one_cell_per_combination(tmp_path):
    config = _config(tmp_path, dims=[2, 4], kappas=[5.0, 10.0], trials=3)
    cells = BenchmarkService.build_cells(config)

    assert len(cells) == 2 * 2 * 2 * 3
    assert len({cell.key for cell in cells}) == len(cells)
    assert len({cell.seed for cell in cells}) == len(cells)


def test_steps_series_shares_one_instance(tmp_path):
    cells = BenchmarkService.build_cells(_config(tmp_path))
    by_trial = {}
    for cell in cells:
        by_trial.setdefault(cell.trial, set()).add(cell.instance_seed)
    assert all(len(seeds) == 1 for seeds in by_trial.values())
    assert by_trial[0] != by_trial[1]


def test_seeds_depend_on_base_seed():
    assert BenchmarkService.trial_seed(0, 2, 10.0, 200, 0) != BenchmarkService.trial_seed(1, 2, 10.0, 200, 0)
    assert BenchmarkService.trial_seed(0, 2, 10.0, 200, 0) == BenchmarkService.trial_seed(0, 2, 10, 200, 0)
    assert 0 <= BenchmarkService.instance_seed(0, 16, 50.0, 9) < 2**63


# --- run_sweep ---

def test_sweep_writes_sorted_csv(tmp_path):
    """Every cell becomes one row, in (dim, kappa, steps, trial) order."""
    # 1. Setup
    config = _config(tmp_path)

    # 2. Action
    records = BenchmarkService.run_sweep(config)

    # 3. Assertions
    assert [record.key for record in records] == [(2, 5.0, 20, 0), (2, 5.0, 20, 1), (2, 5.0, 40, 0), (2, 5.0, 40, 1)]
    with config.output.open(newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 5
    assert rows[1][CSV_COLUMNS.index("truncation_accepted")] in ("true", "false")
    assert rows[1][CSV_COLUMNS.index("wall_ms")] == "0"


def test_sweep_is_reproducible(tmp_path):
    first = _config(tmp_path, output=tmp_path / "first.csv")
    second = _config(tmp_path, output=tmp_path / "second.csv")

    BenchmarkService.run_sweep(first)
    BenchmarkService.run_sweep(second)

    assert first.output.read_bytes() == second.output.read_bytes()


def test_noisy_sweep_is_reproducible(tmp_path):
    noise = {"model": NoiseModel.MEASUREMENT_GAUSSIAN, "strength": 1e-3}
    first = BenchmarkService.run_sweep(_config(tmp_path, noise=noise, output=tmp_path / "a.csv"))
    second = BenchmarkService.run_sweep(_config(tmp_path, noise=noise, output=tmp_path / "b.csv"))
    assert first == second


def test_process_pool_matches_serial_run(tmp_path):
    serial = BenchmarkService.run_sweep(_config(tmp_path, output=tmp_path / "serial.csv"))
    pooled = BenchmarkService.run_sweep(_config(tmp_path, workers=2, output=tmp_path / "pooled.csv"))
    assert serial == pooled


def test_celery_dispatch_matches_local(tmp_path):
    local = BenchmarkService.run_sweep(_config(tmp_path, output=tmp_path / "local.csv"))
    queued = BenchmarkService.run_sweep(
        _config(tmp_path, dispatch=DispatchMode.CELERY, output=tmp_path / "celery.csv")
    )
    assert local == queued


def test_postselection_failure_becomes_status(tmp_path, monkeypatch):
    def vanish(w, R, n, engine):
        raise VanishingPostselectionError("post-selection probability vanished", probability=0.0)

    monkeypatch.setattr(DynamicEngineService, "_encoded_step", staticmethod(vanish))
    cell = BenchmarkService.build_cells(_config(tmp_path))[0]

    row = execute_trial(cell.model_dump(mode="json"))
    assert row["status"] == RunStatus.POSTSELECTION_FAILED.value
    assert row["fidelity"] is None
    assert row["truncation_accepted"] is False


# --- reading results ---

def test_records_read_back(tmp_path):
    config = _config(tmp_path)
    records = BenchmarkService.run_sweep(config)
    assert BenchmarkService.read_records(config.output) == records


def test_empty_fidelity_reads_as_none(tmp_path):
    record = BenchmarkRecord(
        dim=2, kappa=5.0, steps=20, trial=0, seed=1, noise_model=NoiseModel.NONE, noise_strength=0.0,
        engine="dense", instance_seed=2, status=RunStatus.POSTSELECTION_FAILED,
    )
    path = BenchmarkService.write_records([record], tmp_path / "failed.csv")
    assert path.read_text().splitlines()[1].split(",")[CSV_COLUMNS.index("fidelity")] == ""
    assert BenchmarkService.read_records(path)[0].fidelity is None


def test_missing_column_is_named(tmp_path):
    path = tmp_path / "broken.csv"
    path.write_text(",".join(column for column in CSV_COLUMNS if column != "fidelity") + "\n")

    with pytest.raises(SchemaMismatchError) as exc_info:
        BenchmarkService.read_records(path)
    assert "fidelity" in exc_info.value.message


# --- summaries and plots ---

def test_summary_per_steps(tmp_path):
    records = BenchmarkService.run_sweep(_config(tmp_path))
    summaries = BenchmarkService.summarize(records)

    assert [(summary.steps, summary.trials) for summary in summaries] == [(20, 2), (40, 2)]
    for summary in summaries:
        if summary.scored:
            assert summary.min <= summary.mean <= summary.max


def test_summary_skips_unscored_trials():
    base = dict(dim=2, kappa=5.0, steps=20, seed=1, noise_model=NoiseModel.NONE, noise_strength=0.0,
                engine="dense", instance_seed=2)
    records = [
        BenchmarkRecord(trial=0, fidelity=0.9, truncation_accepted=True, status=RunStatus.OK, **base),
        BenchmarkRecord(trial=1, fidelity=0.7, truncation_accepted=True, status=RunStatus.OK, **base),
        BenchmarkRecord(trial=2, status=RunStatus.MODIFY_REQUIRED, **base),
    ]
    (summary,) = BenchmarkService.summarize(records)

    assert summary.trials == 3
    assert summary.scored == 2
    assert summary.mean == pytest.approx(0.8)
    assert (summary.min, summary.max) == (0.7, 0.9)


def test_plot_artifacts(tmp_path):
    config = _config(tmp_path, dims=[2, 4])
    BenchmarkService.run_sweep(config)

    artifacts = BenchmarkService.emit_plots(config.output)

    assert [path.name for path in artifacts.data_files] == ["fidelity_dim2.csv", "fidelity_dim4.csv"]
    assert artifacts.script.name == "plot_fidelity.py"
    assert "fill_between" in artifacts.script.read_text()
    header = artifacts.data_files[0].read_text().splitlines()[0]
    assert header == "kappa,steps,mean,min,max,trials"


def test_rendered_figures(tmp_path):
    config = _config(tmp_path)
    BenchmarkService.run_sweep(config)
    artifacts = BenchmarkService.emit_plots(config.output, tmp_path / "plots")

    figures = BenchmarkService.render_figures(artifacts.script.parent)
    assert [figure.name for figure in figures] == ["fidelity_dim2.png"]
    assert figures[0].stat().st_size > 0


# --- calibration and trends ---

def test_sweep_dt_follows_setting(tmp_path):
    config = _config(tmp_path)
    assert config.dt == settings.DEFAULT_DT
    assert all(cell.dt == settings.DEFAULT_DT for cell in BenchmarkService.build_cells(config))


def test_records_carry_untruncated_fidelity(tmp_path):
    records = BenchmarkService.run_sweep(_config(tmp_path))
    for record in records:
        assert record.status in (RunStatus.OK, RunStatus.MODIFY_REQUIRED)
        assert 0.0 <= record.fidelity_before_truncation <= 1.0


def _record(steps, trial, fidelity, kappa=5.0, full=None):
    return BenchmarkRecord(
        dim=2, kappa=kappa, steps=steps, trial=trial, seed=1, noise_model=NoiseModel.NONE, noise_strength=0.0,
        engine="dense", instance_seed=2, fidelity=fidelity, fidelity_before_truncation=full,
        truncation_accepted=fidelity is not None,
        status=RunStatus.OK if fidelity is not None else RunStatus.MODIFY_REQUIRED,
    )


def test_fidelity_table_counts_missing_as_zero():
    records = [_record(200, 0, 0.9, full=0.8), _record(200, 1, None, full=0.4)]

    assert BenchmarkService.fidelity_table(records) == {(2, 5.0, 200): pytest.approx(0.45)}
    assert BenchmarkService.fidelity_table(records, "fidelity_before_truncation") == {
        (2, 5.0, 200): pytest.approx(0.6),
    }


def test_fidelity_table_rejects_unknown_field():
    with pytest.raises(InvalidInputError):
        BenchmarkService.fidelity_table([], "wall_ms")


def test_steps_trend_of_improving_series():
    """Rejected runs at short schedules tie at zero; the series still ranks as improving."""
    records = [
        _record(steps, 0, None if steps <= 400 else fidelity)
        for steps, fidelity in [(200, 0), (400, 0), (600, 0.95), (800, 0.97), (1000, 0.99)]
    ]
    (rho,) = BenchmarkService.steps_trend(records).values()
    assert rho > 0.8


def test_steps_trend_ignores_differences_below_resolution():
    records = [
        _record(200, 0, 0.5),
        _record(400, 0, 0.99991),
        _record(600, 0, 0.99989),
        _record(800, 0, 0.99990),
    ]
    (rho,) = BenchmarkService.steps_trend(records).values()
    assert rho == pytest.approx(np.sqrt(0.6))


def test_steps_trend_of_degrading_series():
    records = [_record(steps, 0, fidelity) for steps, fidelity in [(200, 0.9), (400, 0.8), (600, 0.7)]]
    assert BenchmarkService.steps_trend(records)[(2, 5.0)] == pytest.approx(-1.0)


def test_steps_trend_without_variation_is_nan():
    flat = [_record(steps, 0, None) for steps in (200, 400)]
    single = [_record(200, 0, 0.9, kappa=10.0)]
    trend = BenchmarkService.steps_trend(flat + single)
    assert np.isnan(trend[(2, 5.0)])
    assert np.isnan(trend[(2, 10.0)])
