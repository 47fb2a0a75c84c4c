from pathlib import Path

import click

from commands.options import dt_option, seed_option
from core.config import settings
from schemas.hamiltonians import Schedule
from services.block_encoding import BlockEncodingService
from services.dynamic_engine import DynamicEngineService
from services.hamiltonians import HamiltonianService
from services.problems import ProblemService


@click.command("depth-report")
@click.option("--dim", type=int, default=2, show_default=True)
@click.option("--kappa", type=float, default=10.0, show_default=True)
@click.option("--steps", type=int, default=2000, show_default=True)
@seed_option(default=0)
@dt_option
@click.option(
    "--dump-program", type=click.Path(path_type=Path), default=None,
    help="Write the first segment's gate program as text.",
)
def depth_report(dim, kappa, steps, seed, dt, dump_program):
    """Depth of one dynamic-circuit segment versus the conventional L-segment circuit."""
    instance = ProblemService.generate_instance(dim, kappa, seed)
    schedule = Schedule(steps=steps, dt=dt or settings.DEFAULT_DT)
    report = DynamicEngineService.depth_report(instance, schedule)

    click.echo(f"segment_depth: {report.segment_depth}")
    click.echo(f"dynamic_total: {report.dynamic_total}")
    click.echo(f"conventional_total: {report.conventional_total}")
    click.echo(f"gate_count: {report.gate_count}")
    click.echo(f"qubits: {report.qubits}")

    if dump_program is not None:
        pair = HamiltonianService.build_pair(instance)
        H = HamiltonianService.interpolate(pair, schedule.s_at(1))
        op = BlockEncodingService.assemble_ua(BlockEncodingService.step_operator_matrix(H, schedule.dt))
        dump_program.parent.mkdir(parents=True, exist_ok=True)
        dump_program.write_text(BlockEncodingService.dump_program(op))
        click.echo(f"wrote {len(op.gates)} gates to {dump_program}")
