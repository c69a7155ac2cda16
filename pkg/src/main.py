"""Command-line entry point for pinching reports."""
import logging
import sys
from pathlib import Path
from typing import Optional

import click
import yaml
from pydantic import ValidationError

from src.geometry.base import ConfigError, PinchingError
from src.geometry.drilling_flow import QUANTITIES
from src.report import dump_report, emit_curves, load_config, rows_to_text, run_report

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_DOMAIN = 3


def describe_validation_error(exc: ValidationError) -> str:
    """One line per invalid field, each prefixed with its dotted path."""
    lines = []
    for error in exc.errors():
        path = ".".join(str(part) for part in error["loc"]) or "<root>"
        lines.append(f"{path}: {error['msg']}")
    return "\n".join(lines)


def write_output(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    Path(out).write_bytes(text.encode("utf-8"))


@click.group()
@click.option("--verbose", is_flag=True, help="Log DEBUG progress messages to stderr.")
def cli(verbose: bool) -> None:
    """Pinching bounds for drilled hyperbolic cone-manifolds."""
    if verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)


@cli.command()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Scenario YAML file.",
)
@click.option("--out", type=click.Path(dir_okay=False), help="Write output here instead of stdout.")
@click.option("--curves", type=click.Choice(QUANTITIES), help="Emit the envelope rows of one quantity.")
@click.option("--component", help="Component whose curve is emitted, when there are several.")
@click.option("--grid", type=click.IntRange(min=2), help="Number of grid points for --curves.")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["report", "rows"]),
    help="Output kind; defaults to rows when --curves is given.",
)
@click.pass_context
def report(
    ctx: click.Context,
    config_path: str,
    out: Optional[str],
    curves: Optional[str],
    component: Optional[str],
    grid: Optional[int],
    output_format: Optional[str],
) -> None:
    """Compute a pinching report (or envelope rows) for a scenario."""
    output_format = output_format or ("rows" if curves else "report")
    if output_format == "rows" and curves is None:
        raise click.UsageError("--format rows needs --curves")
    if output_format == "report" and (curves is not None or grid is not None):
        raise click.UsageError("--curves and --grid only apply to --format rows")

    try:
        config = load_config(config_path)
        if output_format == "rows":
            text = rows_to_text(emit_curves(config, curves, component, grid))
        else:
            text = dump_report(run_report(config))
    except ValidationError as exc:
        click.echo(f"Invalid configuration {config_path}:\n{describe_validation_error(exc)}", err=True)
        ctx.exit(EXIT_CONFIG)
    except (yaml.YAMLError, ConfigError) as exc:
        click.echo(f"Invalid configuration {config_path}: {exc}", err=True)
        ctx.exit(EXIT_CONFIG)
    except PinchingError as exc:
        logger.error(f"ERROR in report: {exc}", exc_info=True)
        click.echo(f"Numeric domain error: {exc}", err=True)
        ctx.exit(EXIT_DOMAIN)

    write_output(text, out)


if __name__ == "__main__":
    cli()
