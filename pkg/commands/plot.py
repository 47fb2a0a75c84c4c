from pathlib import Path

import click

from commands.options import out_option
from services.benchmarks import BenchmarkService


@click.command()
@click.argument("csv_path", type=click.Path(path_type=Path, exists=True, dir_okay=False))
@out_option("Directory for plot data and script (default: <csv dir>/plots).")
@click.option("--render/--no-render", default=False, help="Also render PNG figures with matplotlib.")
def plot(csv_path, out, render):
    """Emit per-dimension fidelity-vs-steps series and a plotting script."""
    artifacts = BenchmarkService.emit_plots(csv_path, out)
    for data_file in artifacts.data_files:
        click.echo(f"data: {data_file}")
    click.echo(f"script: {artifacts.script}")

    if render:
        for figure in BenchmarkService.render_figures(artifacts.script.parent):
            click.echo(f"figure: {figure}")
