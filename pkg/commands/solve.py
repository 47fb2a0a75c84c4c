import json
from pathlib import Path

import click

from commands.options import (
    build_noise,
    dt_option,
    engine_option,
    instance_options,
    load_or_generate,
    noise_options,
    out_option,
    seed_option,
)
from core.config import settings
from core.logging_config import get_logger
from models.enums import EngineKind
from schemas.hamiltonians import Schedule
from services.dynamic_engine import DynamicEngineService

logger = get_logger(__name__)

# exit status when the run asks for a longer schedule
EXIT_MODIFY = 3


@click.command()
@instance_options
@click.option("--steps", type=int, default=2000, show_default=True, help="Number of adiabatic steps L.")
@seed_option(default=1)
@dt_option
@noise_options
@engine_option
@click.option("--delta", type=float, default=None, help="Sign-prediction threshold (default max(0.01, 3 sigma)).")
@out_option("Write the result and depth report as JSON.")
@click.pass_context
def solve(ctx, instance_path, dim, kappa, steps, seed, dt, noise_model, noise_strength, shots, engine, delta, out):
    """Solve one instance with the segmented dynamic-circuit protocol."""
    instance = load_or_generate(instance_path, dim, kappa, seed)
    schedule = Schedule(steps=steps, dt=dt or settings.DEFAULT_DT)
    noise = build_noise(noise_model, noise_strength, shots)

    trace = DynamicEngineService.run_segmented_solve(
        instance, schedule,
        noise=noise,
        engine=EngineKind(engine) if engine else EngineKind.DENSE,
        delta=delta,
        seed=seed,
    )
    report = DynamicEngineService.depth_report(instance, schedule)
    result = trace.result

    click.echo(f"dim: {instance.dim}  kappa: {instance.kappa:g}  steps: {schedule.steps}  dt: {schedule.dt:g}")
    if result.fidelity is not None:
        click.echo(f"fidelity: {result.fidelity:.6f}")
    click.echo(f"fidelity_before_truncation: {result.fidelity_before_truncation:.6f}")
    click.echo(f"imag_residual: {result.imag_residual:.3e}")
    click.echo(f"truncation_accepted: {str(result.truncation_accepted).lower()}")
    click.echo(
        f"segment_depth: {report.segment_depth}  dynamic_total: {report.dynamic_total}  "
        f"conventional_total: {report.conventional_total}"
    )

    if out is not None:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            "result": result.model_dump(mode="json"),
            "depth": report.model_dump(mode="json"),
            "status": trace.status.value,
            "seed": seed,
            "engine": trace.engine.value,
        }
        out.write_text(json.dumps(payload, indent=2))

    if not result.truncation_accepted:
        click.echo(
            f"truncation rejected (residual {result.imag_residual:.3e}); "
            f"modify T, dt: retry with --steps {result.suggested_steps}",
            err=True,
        )
        ctx.exit(EXIT_MODIFY)
