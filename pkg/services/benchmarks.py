import csv
import hashlib
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.stats import spearmanr

from core.config import settings
from core.errors import AdialinError, InvalidInputError, SchemaMismatchError, VanishingPostselectionError
from core.logging_config import get_logger
from models.enums import DispatchMode, RunStatus
from schemas.benchmarks import BenchmarkRecord, FidelitySummary, PlotArtifacts, SweepConfig, TrialCell
from schemas.hamiltonians import Schedule
from services.dynamic_engine import DynamicEngineService
from services.problems import ProblemService
from utils.logger import log_stage, log_trial

logger = get_logger(__name__)

CSV_COLUMNS = list(BenchmarkRecord.model_fields)
SEED_MASK = (1 << 63) - 1
PLOT_SCRIPT = "plot_fidelity.py"


def _hash_seed(*parts) -> int:
    text = ":".join(format(part, ".17g") if isinstance(part, float) else str(part) for part in parts)
    return int(hashlib.sha256(text.encode()).hexdigest()[:16], 16) & SEED_MASK


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def execute_trial(cell: dict) -> dict:
    """Run one sweep cell and return its BenchmarkRecord as a JSON-ready dict.

    Module-level so process pools and celery workers can import it. Per-trial
    failures become a status, never an exception.
    """
    cell = TrialCell.model_validate(cell)
    fidelity: Optional[float] = None
    fidelity_full: Optional[float] = None
    residual: Optional[float] = None
    accepted = False
    wall_ms = 0.0

    try:
        instance = ProblemService.generate_instance(cell.dim, cell.kappa, cell.instance_seed)
        schedule = Schedule(steps=cell.steps, dt=cell.dt)
        trace = DynamicEngineService.run_segmented_solve(
            instance, schedule,
            noise=cell.noise, engine=cell.engine, delta=cell.delta, seed=cell.seed,
        )
        status = trace.status
        fidelity = trace.result.fidelity
        fidelity_full = trace.result.fidelity_before_truncation
        residual = trace.result.imag_residual
        accepted = trace.result.truncation_accepted
        wall_ms = trace.wall_ms
    except VanishingPostselectionError as exc:
        status = RunStatus.POSTSELECTION_FAILED
        logger.warning("Trial post-selection vanished", extra={**exc.context, "trial": cell.trial})
    except AdialinError as exc:
        status = RunStatus.FAILED
        logger.warning("Trial failed", extra={**exc.context, "code": exc.code.value, "trial": cell.trial})

    log_trial(
        logger, cell.dim, cell.kappa, cell.steps, cell.trial, status,
        fidelity if fidelity is not None else 0.0, wall_ms,
        extra={"seed": cell.seed, "engine": cell.engine.value},
    )
    record = BenchmarkRecord(
        dim=cell.dim,
        kappa=cell.kappa,
        steps=cell.steps,
        trial=cell.trial,
        seed=cell.seed,
        noise_model=cell.noise.model,
        noise_strength=cell.noise.strength,
        engine=cell.engine,
        fidelity=fidelity,
        fidelity_before_truncation=fidelity_full,
        imag_residual=residual,
        truncation_accepted=accepted,
        wall_ms=wall_ms if cell.record_wall_time else 0.0,
        instance_seed=cell.instance_seed,
        status=status,
    )
    return record.model_dump(mode="json")


class BenchmarkService:
    @staticmethod
    def trial_seed(base_seed: int, dim: int, kappa: float, steps: int, trial: int) -> int:
        return _hash_seed(base_seed, dim, float(kappa), steps, trial)

    @staticmethod
    def instance_seed(base_seed: int, dim: int, kappa: float, trial: int) -> int:
        """Shared by every step count of a trial, so a steps series reuses one instance."""
        return _hash_seed(base_seed, dim, float(kappa), trial)

    @staticmethod
    def build_cells(config: SweepConfig) -> list[TrialCell]:
        cells = []
        for dim in config.dims:
            for kappa in config.kappas:
                for steps in config.steps_list:
                    for trial in range(config.trials):
                        cells.append(TrialCell(
                            dim=dim,
                            kappa=kappa,
                            steps=steps,
                            trial=trial,
                            seed=BenchmarkService.trial_seed(config.base_seed, dim, kappa, steps, trial),
                            instance_seed=BenchmarkService.instance_seed(config.base_seed, dim, kappa, trial),
                            dt=config.dt,
                            noise=config.noise,
                            engine=config.engine,
                            delta=config.delta,
                            record_wall_time=config.record_wall_time,
                        ))
        return cells

    @staticmethod
    def _dispatch(config: SweepConfig, payloads: list[dict]) -> list[dict]:
        if config.dispatch == DispatchMode.CELERY:
            from core.celery_app import celery_app
            from tasks.trials import run_trial_task

            logger.debug("Dispatching through celery", extra={"eager": celery_app.conf.task_always_eager})
            pending = [run_trial_task.delay(payload) for payload in payloads]
            return [result.get() for result in pending]

        workers = min(config.workers or settings.worker_count(), len(payloads))
        if workers <= 1:
            return [execute_trial(payload) for payload in payloads]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            chunksize = max(1, len(payloads) // (workers * 4))
            return list(executor.map(execute_trial, payloads, chunksize=chunksize))

    @staticmethod
    def run_sweep(config: SweepConfig) -> list[BenchmarkRecord]:
        """Run every (dim, kappa, steps, trial) cell and write the sorted records to config.output."""
        cells = BenchmarkService.build_cells(config)
        payloads = [cell.model_dump(mode="json") for cell in cells]
        logger.info(
            "Sweep started",
            extra={"cells": len(cells), "dispatch": config.dispatch.value, "engine": config.engine.value},
        )

        started = time.perf_counter()
        rows = BenchmarkService._dispatch(config, payloads)
        log_stage(logger, "dispatch", (time.perf_counter() - started) * 1000, items=len(rows))

        records = sorted((BenchmarkRecord.model_validate(row) for row in rows), key=lambda record: record.key)
        BenchmarkService.write_records(records, config.output)

        failed = sum(record.status != RunStatus.OK for record in records)
        logger.info(
            "Sweep finished",
            extra={"cells": len(records), "not_ok": failed, "output": str(config.output)},
        )
        return records

    @staticmethod
    def write_records(records: list[BenchmarkRecord], path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for record in records:
                writer.writerow([_format_value(getattr(record, column)) for column in CSV_COLUMNS])
        return path

    @staticmethod
    def read_records(path: Path) -> list[BenchmarkRecord]:
        path = Path(path)
        with path.open(newline="") as f:
            reader = csv.DictReader(f)
            header = reader.fieldnames or []
            missing = [column for column in CSV_COLUMNS if column not in header]
            if missing:
                raise SchemaMismatchError(
                    f"results file is missing column '{missing[0]}'",
                    path=str(path), missing=missing,
                )
            return [
                BenchmarkRecord.model_validate({
                    column: (row[column] if row[column] != "" else None) for column in CSV_COLUMNS
                })
                for row in reader
            ]

    @staticmethod
    def summarize(records: list[BenchmarkRecord]) -> list[FidelitySummary]:
        """Mean and min/max fidelity per (dim, kappa, steps) over trials that produced one."""
        groups = defaultdict(list)
        for record in records:
            groups[(record.dim, record.kappa, record.steps)].append(record)

        summaries = []
        for (dim, kappa, steps), group in sorted(groups.items()):
            scores = np.array([record.fidelity for record in group if record.fidelity is not None])
            summaries.append(FidelitySummary(
                dim=dim,
                kappa=kappa,
                steps=steps,
                trials=len(group),
                scored=scores.size,
                mean=float(scores.mean()) if scores.size else None,
                min=float(scores.min()) if scores.size else None,
                max=float(scores.max()) if scores.size else None,
            ))
        return summaries

    @staticmethod
    def fidelity_table(
        records: list[BenchmarkRecord], field: str = "fidelity",
    ) -> dict[tuple[int, float, int], float]:
        """Mean of `field` per (dim, kappa, steps), counting trials without a value as 0.

        A rejected truncation or a failed trial scores zero here, unlike `summarize`,
        which averages only the trials that produced a fidelity.
        """
        if field not in ("fidelity", "fidelity_before_truncation"):
            raise InvalidInputError("unknown fidelity field", field=field)
        groups = defaultdict(list)
        for record in records:
            value = getattr(record, field)
            groups[(record.dim, record.kappa, record.steps)].append(0.0 if value is None else value)
        return {key: float(np.mean(values)) for key, values in sorted(groups.items())}

    @staticmethod
    def steps_trend(
        records: list[BenchmarkRecord], resolution: float = 1e-4,
    ) -> dict[tuple[int, float], float]:
        """Spearman rank correlation between steps and mean fidelity per (dim, kappa).

        Means are rounded to `resolution` first, so differences below it rank as ties.
        A series with a single step count or a constant mean has no trend and maps to nan.
        """
        decimals = max(0, int(round(-np.log10(resolution))))
        series = defaultdict(list)
        for (dim, kappa, steps), mean in BenchmarkService.fidelity_table(records).items():
            series[(dim, kappa)].append((steps, round(mean, decimals)))

        trend = {}
        for key, points in sorted(series.items()):
            steps = [point[0] for point in points]
            means = [point[1] for point in points]
            if len(points) < 2 or np.ptp(means) == 0:
                trend[key] = float("nan")
                continue
            trend[key] = float(spearmanr(steps, means).statistic)
        return trend

    @staticmethod
    def emit_plots(csv_path: Path, out_dir: Optional[Path] = None) -> PlotArtifacts:
        """Per-dim series files (kappa, steps, mean, min, max) plus a standalone plotting script."""
        csv_path = Path(csv_path)
        out_dir = Path(out_dir) if out_dir is not None else csv_path.parent / "plots"
        out_dir.mkdir(parents=True, exist_ok=True)

        summaries = BenchmarkService.summarize(BenchmarkService.read_records(csv_path))
        by_dim = defaultdict(list)
        for summary in summaries:
            by_dim[summary.dim].append(summary)

        data_files = []
        for dim, rows in sorted(by_dim.items()):
            data_path = out_dir / f"fidelity_dim{dim}.csv"
            with data_path.open("w", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(["kappa", "steps", "mean", "min", "max", "trials"])
                for row in rows:
                    writer.writerow([
                        _format_value(row.kappa), row.steps,
                        _format_value(row.mean), _format_value(row.min), _format_value(row.max),
                        row.trials,
                    ])
            data_files.append(data_path)

        script = out_dir / PLOT_SCRIPT
        script.write_text(_PLOT_SCRIPT_SOURCE)
        logger.info("Plot data written", extra={"files": len(data_files), "out_dir": str(out_dir)})
        return PlotArtifacts(data_files=data_files, script=script)

    @staticmethod
    def render_figures(plot_dir: Path) -> list[Path]:
        """Render every fidelity_dim*.csv in `plot_dir` to a PNG next to it."""
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        figures = []
        for data_path in sorted(Path(plot_dir).glob("fidelity_dim*.csv")):
            series = _read_series(data_path)
            fig, ax = plt.subplots(figsize=(6, 4))
            for kappa, points in sorted(series.items()):
                steps = [point[0] for point in points]
                ax.plot(steps, [point[1] for point in points], marker="o", label=f"kappa={kappa:g}")
                ax.fill_between(steps, [point[2] for point in points], [point[3] for point in points], alpha=0.2)
            ax.set_xlabel("evolution steps")
            ax.set_ylabel("fidelity")
            ax.set_title(data_path.stem.replace("fidelity_dim", "dim "))
            ax.legend()
            fig.tight_layout()
            figure = data_path.with_suffix(".png")
            fig.savefig(figure, dpi=150)
            plt.close(fig)
            figures.append(figure)
        return figures


def _read_series(data_path: Path) -> dict[float, list[tuple[int, float, float, float]]]:
    """kappa -> [(steps, mean, min, max)] sorted by steps; unscored rows are skipped."""
    series = defaultdict(list)
    with data_path.open(newline="") as f:
        for row in csv.DictReader(f):
            if row["mean"] == "":
                continue
            series[float(row["kappa"])].append(
                (int(row["steps"]), float(row["mean"]), float(row["min"]), float(row["max"]))
            )
    return {kappa: sorted(points) for kappa, points in series.items()}


_PLOT_SCRIPT_SOURCE = '''"""Fidelity vs evolution steps, one figure per dimension, min/max band over trials.

Run from this directory: python plot_fidelity.py
"""
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent

for data_path in sorted(here.glob("fidelity_dim*.csv")):
    series = defaultdict(list)
    with data_path.open(newline="") as f:
        for row in csv.DictReader(f):
            if row["mean"] == "":
                continue
            series[float(row["kappa"])].append(
                (int(row["steps"]), float(row["mean"]), float(row["min"]), float(row["max"]))
            )

    fig, ax = plt.subplots(figsize=(6, 4))
    for kappa, points in sorted(series.items()):
        points.sort()
        steps = [p[0] for p in points]
        ax.plot(steps, [p[1] for p in points], marker="o", label=f"kappa={kappa:g}")
        ax.fill_between(steps, [p[2] for p in points], [p[3] for p in points], alpha=0.2)
    ax.set_xlabel("evolution steps")
    ax.set_ylabel("fidelity")
    ax.set_title(data_path.stem.replace("fidelity_dim", "dim "))
    ax.legend()
    fig.tight_layout()
    fig.savefig(data_path.with_suffix(".png"), dpi=150)
    plt.close(fig)
'''
