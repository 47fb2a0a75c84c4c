import click

from commands.options import dt_option, instance_options, load_or_generate, out_option, seed_option
from core.config import settings
from schemas.hamiltonians import Schedule
from services.hamiltonians import HamiltonianService


@click.command("gap-scan")
@instance_options
@seed_option(default=0)
@click.option("--grid", "grid_points", type=int, default=101, show_default=True, help="Points on the s grid.")
@click.option("--steps", type=int, default=2000, show_default=True, help="Steps L for the validity report.")
@dt_option
@out_option("Write s, gap, criterion as CSV.")
def gap_scan(instance_path, dim, kappa, seed, grid_points, steps, dt, out):
    """Spectral gap of H(s) and the adiabatic criterion along the path."""
    instance = load_or_generate(instance_path, dim, kappa, seed)
    pair = HamiltonianService.build_pair(instance)
    points = HamiltonianService.gap_scan(pair, grid_points)
    schedule = Schedule(steps=steps, dt=dt or settings.DEFAULT_DT)

    scored = [point for point in points if not point.flagged]
    if scored:
        narrowest = min(scored, key=lambda point: point.gap)
        click.echo(f"min_gap: {narrowest.gap:.6e} at s={narrowest.s:.4f}")
        click.echo(f"max_criterion: {max(point.criterion for point in scored):.6e}")
    click.echo(f"flagged_points: {len(points) - len(scored)}")
    click.echo(f"stepwise_validity: {HamiltonianService.stepwise_validity(pair, schedule):.6e}")

    if out is not None:
        HamiltonianService.write_gap_csv(points, out)
        click.echo(f"wrote {len(points)} points to {out}")
