from pathlib import Path

import click

from commands.options import dt_option, engine_option, noise_options, out_option, seed_option
from core.errors import InvalidInputError
from core.config import settings
from models.enums import DispatchMode, NoiseModel
from schemas.benchmarks import SweepConfig
from services.benchmarks import BenchmarkService


def _load_config(config_path: Path | None) -> dict:
    if config_path is None:
        return {}
    if not config_path.is_file():
        raise InvalidInputError("config file not found", path=str(config_path))
    return SweepConfig.model_validate_json(config_path.read_text()).model_dump(exclude_unset=True)


@click.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None, help="JSON SweepConfig.")
@seed_option(default=None)
@dt_option
@noise_options
@engine_option
@click.option("--trials", type=int, default=None, help="Trials per cell.")
@click.option("--dispatch", type=click.Choice([mode.value for mode in DispatchMode]), default=None)
@click.option("--workers", type=int, default=None, help="Local worker processes (default ADIALIN_THREADS).")
@out_option("CSV results path.")
def sweep(config_path, seed, dt, noise_model, noise_strength, shots, engine, trials, dispatch, workers, out):
    """Run a benchmark sweep and write one CSV row per (dim, kappa, steps, trial)."""
    values = _load_config(config_path)

    overrides = {
        "base_seed": seed,
        "dt": dt,
        "engine": engine,
        "trials": trials,
        "dispatch": dispatch,
        "workers": workers,
        "output": out,
    }
    values.update({key: value for key, value in overrides.items() if value is not None})
    if noise_model is not None or noise_strength is not None or shots is not None:
        noise = dict(values.get("noise") or {})
        if noise_model is not None:
            noise["model"] = noise_model
            if noise_model == NoiseModel.MEASUREMENT_GAUSSIAN.value and noise_strength is None:
                noise.setdefault("strength", settings.DEFAULT_NOISE_SIGMA)
        if noise_strength is not None:
            noise["strength"] = noise_strength
        if shots is not None:
            noise["shots"] = shots
        values["noise"] = noise

    config = SweepConfig.model_validate(values)
    records = BenchmarkService.run_sweep(config)

    for summary in BenchmarkService.summarize(records):
        mean = "-" if summary.mean is None else f"{summary.mean:.4f}"
        band = "-" if summary.min is None else f"[{summary.min:.4f}, {summary.max:.4f}]"
        click.echo(
            f"dim={summary.dim} kappa={summary.kappa:g} steps={summary.steps} "
            f"mean={mean} band={band} scored={summary.scored}/{summary.trials}"
        )
    if len(config.steps_list) > 1:
        for (dim, kappa), rho in BenchmarkService.steps_trend(records).items():
            click.echo(f"trend dim={dim} kappa={kappa:g} spearman={rho:.3f}")
    click.echo(f"wrote {len(records)} records to {config.output}")
