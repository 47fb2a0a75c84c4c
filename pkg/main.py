# Essential imports
import sys
import time
from typing import Optional, Sequence

import click
from pydantic import ValidationError

from commands import depth_report, gap_scan, plot, solve, sweep, verify_encoding
from core.config import settings
from core.errors import AdialinError

# Logging imports
from core.logging_config import get_logger, setup_logging
from utils.run_context import run_context

logger = get_logger(__name__)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--log-level", default=None, help=f"Console log level (default {settings.LOG_LEVEL}).")
@click.pass_context
def cli(ctx, log_level):
    """adialin: dynamic-circuit discrete adiabatic linear-system solver."""
    setup_logging(
        log_level=log_level or settings.LOG_LEVEL,
        log_dir=settings.LOG_DIR
    )
    ctx.ensure_object(dict)


cli.add_command(solve.solve)
cli.add_command(sweep.sweep)
cli.add_command(verify_encoding.verify_encoding)
cli.add_command(gap_scan.gap_scan)
cli.add_command(depth_report.depth_report)
cli.add_command(plot.plot)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI and map outcomes to exit statuses.

    0 success, 1 solver or validation error (one-line message on stderr),
    2 usage error (with usage text), 3 truncation rejected (from `solve`).
    """
    args = list(sys.argv[1:] if argv is None else argv)
    start_time = time.time()

    with run_context():
        try:
            rv = cli.main(args=args, prog_name="adialin", standalone_mode=False)
        except click.UsageError as exc:
            exc.show()
            return 2
        except click.ClickException as exc:
            exc.show()
            return exc.exit_code
        except click.Abort:
            click.echo("Aborted!", err=True)
            return 1
        except AdialinError as exc:
            logger.error(exc.message, extra={**exc.context, "code": exc.code.value})
            click.echo(f"error: {exc}", err=True)
            return 1
        except ValidationError as exc:
            first = exc.errors()[0]
            location = ".".join(str(part) for part in first["loc"]) or "input"
            click.echo(f"error: invalid {location}: {first['msg']}", err=True)
            return 1
        except Exception as exc:
            logger.error(
                f"Unhandled exception: {str(exc)}",
                extra={"argv": args, "error_type": type(exc).__name__},
                exc_info=True
            )
            click.echo("error: internal error, see logs", err=True)
            return 1

        duration = (time.time() - start_time) * 1000
        logger.debug(
            "Command finished",
            extra={"argv": args, "duration_ms": round(duration, 2)}
        )

    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
