"""Command-line interface for larmerge using Typer."""

import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, NoReturn, Optional

import click
import typer
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from . import __version__
from .config import RunConfig
from .errors import LarmergeError
from .pipeline.merge import Arrangement
from .services import ArrangementService, ChainService, StatsService

app = typer.Typer(
    name="larmerge",
    help="Regularized arrangements of the plane and space from cellular complexes",
    add_completion=False,
)
console = Console()
err_console = Console(stderr=True)

logger = logging.getLogger(__name__)


@dataclass
class CliState:
    config: RunConfig = field(default_factory=RunConfig)
    json_errors: bool = False


def _state(ctx: typer.Context) -> CliState:
    return ctx.find_object(CliState) or CliState()


def _error_payload(e: Exception) -> dict:
    if isinstance(e, LarmergeError):
        return e.to_dict()
    # bad values and unreadable files are input errors; anything else is internal
    code = 2 if isinstance(e, (ValueError, OSError)) else 1
    return {"error": type(e).__name__, "message": str(e), "exit_code": code, "provenance": None}


def _fail(ctx: typer.Context, e: Exception) -> NoReturn:
    payload = _error_payload(e)
    if _state(ctx).json_errors:
        typer.echo(json.dumps(payload, sort_keys=True), err=True)
    else:
        err_console.print(f"[red]✗[/red] Error: {payload['message']}")
    logger.debug("Command failed", exc_info=e)
    raise typer.Exit(code=payload["exit_code"])


def _emit(service: ArrangementService, arrangement: Arrangement, output, format_type: str):
    """Write to ``output``, or print text formats to stdout."""
    if output is not None:
        service.export(arrangement, output, format_type)
        console.print(
            f"[green]✓[/green] Wrote {arrangement.n_cells} cells as {format_type} to {output}"
        )
        return
    if format_type == "parquet":
        raise click.UsageError("Parquet output needs --output")
    typer.echo(service.export(arrangement, None, format_type).decode("utf-8"), nl=False)


@app.callback()
def main_callback(
    ctx: typer.Context,
    epsilon: Optional[float] = typer.Option(
        None, "--epsilon", "-e", help="Relative merge tolerance"
    ),
    jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Parallel workers"),
    deterministic: Optional[bool] = typer.Option(
        None, "--deterministic/--no-deterministic", help="Reduce parallel results in input order"
    ),
    parity: Optional[bool] = typer.Option(
        None, "--parity/--no-parity", help="Declare components at odd depth void"
    ),
    config_file: Optional[Path] = typer.Option(None, "--config", help="YAML run configuration"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
    json_errors: bool = typer.Option(
        False, "--json-errors", help="Report errors as JSON on stderr"
    ),
):
    """Global options shared by all commands."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING)
    state = CliState(json_errors=json_errors)
    ctx.obj = state

    try:
        config = RunConfig.from_yaml(config_file) if config_file else RunConfig()
        if epsilon is not None:
            config.epsilon = epsilon
        if jobs is not None:
            config.jobs = jobs
        if deterministic is not None:
            config.deterministic = deterministic
        if parity is not None:
            config.parity = parity
        state.config = config
    except Exception as e:
        _fail(ctx, e)


@app.command()
def arrange2d(
    ctx: typer.Context,
    input_file: Path = typer.Argument(..., help="LAR or OBJ file with segments"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Output file"),
    svg: bool = typer.Option(False, "--svg", help="Write SVG instead of LAR JSON"),
    format: Optional[str] = typer.Option(
        None, "--format", "-f", help="Output format: lar, svg, parquet"
    ),
):
    """Arrange the plane induced by the edges of a 2D complex."""
    state = _state(ctx)
    service = ArrangementService(state.config)
    format_type = "svg" if svg else (format or state.config.export.format)

    try:
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=err_console,
            transient=True,
        ) as progress:
            task = progress.add_task("Arranging segments...", total=None)
            arrangement = service.arrange([input_file], dim=2)
            progress.update(task, description=f"Extracted {arrangement.n_cells} faces")

        _emit(service, arrangement, output, format_type)

    except (LarmergeError, OSError, ValueError) as e:
        _fail(ctx, e)


@app.command()
def arrange3d(
    ctx: typer.Context,
    input_files: List[Path] = typer.Argument(..., help="LAR or OBJ boundary meshes"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Output file"),
    obj: bool = typer.Option(False, "--obj", help="Write OBJ instead of LAR JSON"),
    exploded: Optional[float] = typer.Option(
        None, "--exploded", help="Push 3-cells apart in OBJ output by this factor"
    ),
    format: Optional[str] = typer.Option(
        None, "--format", "-f", help="Output format: lar, obj, parquet"
    ),
):
    """Merge 3D complexes into the arrangement of space they induce."""
    state = _state(ctx)
    format_type = "obj" if obj else (format or state.config.export.format)

    try:
        if exploded is not None:
            state.config.export.exploded = exploded
        service = ArrangementService(state.config)

        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=err_console,
            transient=True,
        ) as progress:
            task = progress.add_task(f"Merging {len(input_files)} complexes...", total=None)
            arrangement = service.arrange(input_files, dim=3)
            progress.update(task, description=f"Extracted {arrangement.n_cells} cells")

        _emit(service, arrangement, output, format_type)

    except (LarmergeError, OSError, ValueError) as e:
        _fail(ctx, e)


@app.command()
def boundary(
    ctx: typer.Context,
    input_file: Path = typer.Argument(..., help="LAR or OBJ file"),
    dim: int = typer.Option(..., "--dim", "-d", help="Dimension of the chain"),
    chain: str = typer.Option(..., "--chain", "-c", help='Cells as "(+|-)index" tokens'),
    mod2: bool = typer.Option(False, "--mod2", help="Coefficients modulo 2"),
):
    """Print the boundary of a chain as "(+|-)index" tokens."""
    try:
        complex_ = ArrangementService(_state(ctx).config).load(input_file)
        result = ChainService.boundary(complex_, dim, chain, mod2)
        typer.echo(" ".join(result.tokens()))

    except (LarmergeError, OSError, ValueError) as e:
        _fail(ctx, e)


@app.command()
def adjacency(
    ctx: typer.Context,
    input_file: Path = typer.Argument(..., help="LAR or OBJ file"),
    rel: str = typer.Option("VV", "--rel", "-r", help="Relation: VV, EE, FF, TT, VE, EF, ..."),
    threshold: Optional[int] = typer.Option(None, "--threshold", "-t", help="Shared vertices"),
    at_least: bool = typer.Option(False, "--at-least", help="Share at least --threshold"),
    as_json: bool = typer.Option(False, "--json", help="Print one JSON list"),
):
    """Print adjacency lists between cells."""
    try:
        complex_ = ArrangementService(_state(ctx).config).load(input_file)
        rows = ChainService.adjacency(complex_, rel, threshold, at_least)
        if as_json:
            typer.echo(json.dumps(rows))
        else:
            for i, row in enumerate(rows):
                typer.echo(f"{i}: {' '.join(map(str, row))}")

    except (LarmergeError, OSError, ValueError) as e:
        _fail(ctx, e)


@app.command()
def stats(
    ctx: typer.Context,
    input_file: Path = typer.Argument(..., help="LAR or OBJ file"),
    arrange: bool = typer.Option(False, "--arrange", help="Arrange the input first"),
):
    """Show the f-vector, Euler characteristic and component counts."""
    try:
        service = ArrangementService(_state(ctx).config)
        complex_ = service.arrange([input_file]) if arrange else service.load(input_file)
        summary = StatsService.get_complex_stats(complex_)

        typer.echo(StatsService.summary_line(summary))

        stats_table = Table(title="Complex Statistics")
        stats_table.add_column("Metric", style="cyan")
        stats_table.add_column("Value", style="magenta")

        stats_table.add_row("Dimension", str(summary["dim"]))
        stats_table.add_row("Euler characteristic", str(summary["euler"]))
        stats_table.add_row("Connected components", str(summary["components"]))
        stats_table.add_row("Regularized", "yes" if summary["regularized"] else "no")
        if "shells" in summary:
            stats_table.add_row("Shells", str(summary["shells"]))
            stats_table.add_row("Dangling facets", str(summary["dangling"]))
        if "total_measure" in summary:
            stats_table.add_row("Total measure", f"{summary['total_measure']:.6g}")

        console.print(stats_table)

    except (LarmergeError, OSError, ValueError) as e:
        _fail(ctx, e)


@app.command()
def config(
    ctx: typer.Context,
    output: Path = typer.Argument(..., help="Output config file (YAML)"),
    preset: str = typer.Option("default", "--preset", "-p", help="Preset: default, precise, fast"),
):
    """Generate configuration file with presets."""
    try:
        run_config = RunConfig.preset(preset)
        run_config.save_yaml(output)
        console.print(f"[green]✓[/green] Generated config at {output} with preset '{preset}'")

    except (OSError, ValueError) as e:
        _fail(ctx, e)


@app.command()
def version():
    """Show version information."""
    console.print(f"larmerge version {__version__}")


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI and return its exit code.

    0 on success, 1 on usage errors, 2 on input errors and 3 on geometric
    degeneracies.
    """
    try:
        code = app(args=argv, prog_name="larmerge", standalone_mode=False)
    except click.UsageError as e:
        if "--json-errors" in (sys.argv[1:] if argv is None else argv):
            payload = {"error": "UsageError", "message": e.format_message(), "exit_code": 1}
            typer.echo(json.dumps({**payload, "provenance": None}, sort_keys=True), err=True)
        else:
            e.show()
        return 1
    except click.Abort:
        return 1
    return code if isinstance(code, int) else 0


if __name__ == "__main__":
    raise SystemExit(main())
