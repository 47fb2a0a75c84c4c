import click

from commands.options import seed_option
from services.block_encoding import BlockEncodingService


@click.command("verify-encoding")
@click.option("--n", "n", type=click.IntRange(min=1), default=2, show_default=True, help="Encoded matrix is 2^n x 2^n.")
@click.option("--trials", type=click.IntRange(min=1), default=20, show_default=True)
@seed_option(default=0)
@click.pass_context
def verify_encoding(ctx, n, trials, seed):
    """Check U_A on random matrices: top-left block M / 2^n and unitarity."""
    check = BlockEncodingService.verify_encoding(n, trials, seed)
    click.echo(f"n: {check.n}  trials: {check.trials}")
    click.echo(f"max_block_error: {check.max_block_error:.3e}")
    click.echo(f"max_unitarity_error: {check.max_unitarity_error:.3e}")
    click.echo(f"tolerance: {check.tolerance:.0e}  passed: {str(check.passed).lower()}")
    if not check.passed:
        ctx.exit(1)
