"""
gpsav CLI - Command Line Interface
"""

import logging
from pathlib import Path
from typing import Optional

import click
import numpy as np

from gpsav import __version__
from gpsav.config import PRESETS, ExperimentConfig, load_preset
from gpsav.core.diagnostics import format_error, format_time
from gpsav.exceptions import (
    ConfigError,
    GpSavError,
    InvalidArgumentError,
    NumericalBlowupError,
    SnapshotFormatError,
    StepDivergedError,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_IO = 4
EXIT_DIVERGED = 5
EXIT_BLOWUP = 6
EXIT_OTHER = 7


def exit_code_for(error: BaseException) -> int:
    """Map a library or I/O error onto the documented exit code"""
    if isinstance(error, ConfigError):
        return EXIT_CONFIG
    if isinstance(error, (SnapshotFormatError, OSError)):
        return EXIT_IO
    if isinstance(error, StepDivergedError):
        return EXIT_DIVERGED
    if isinstance(error, NumericalBlowupError):
        return EXIT_BLOWUP
    return EXIT_OTHER


def _console():
    from rich.console import Console

    return Console()


def _fail(console, error: BaseException) -> None:
    console.print(f"\n[bold red]❌ Error: {error}[/bold red]")
    raise SystemExit(exit_code_for(error))


def _resolve_config(
    config_path: Optional[str],
    preset: Optional[str],
    overrides: tuple[str, ...],
) -> ExperimentConfig:
    if config_path and preset:
        raise click.UsageError("use either --config or --preset, not both")
    if config_path:
        config = ExperimentConfig.load(Path(config_path))
    elif preset:
        config = load_preset(preset)
    else:
        config = ExperimentConfig()
    if overrides:
        config = config.apply_overrides(list(overrides))
    return config.validate()


def config_options(func):
    """--config / --preset / --override, shared by run and converge"""
    func = click.option(
        "-O", "--override", "overrides", multiple=True, metavar="KEY=VALUE",
        help="Override one config key (repeatable)",
    )(func)
    func = click.option("-p", "--preset", help="Start from a named preset")(func)
    func = click.option(
        "-c", "--config", "config_path", type=click.Path(dir_okay=False),
        help="Experiment config file (key = value lines)",
    )(func)
    return func


@click.group()
@click.version_option(version=__version__, prog_name="gpsav")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
def cli(verbose: bool):
    """gpsav - Gauss collocation SAV solver for the rotating GP equation

    \b
    Exit codes:
      0  success
      2  usage error
      3  configuration error
      4  I/O or snapshot format error
      5  stage fixed point diverged
      6  numerical blow-up (NaN/Inf)
      7  other solver error
    """
    from rich.logging import RichHandler

    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=False, show_path=False)],
        force=True,
    )


@cli.command()
@config_options
@click.option("-o", "--output", help="Output directory (overrides output.dir)")
@click.option("-q", "--quiet", is_flag=True, help="Suppress progress output")
def run(config_path: Optional[str], preset: Optional[str], overrides, output: Optional[str], quiet: bool):
    """Run one experiment and write manifest, diagnostics and snapshots"""
    from rich.progress import (
        BarColumn,
        MofNCompleteColumn,
        Progress,
        SpinnerColumn,
        TextColumn,
        TimeRemainingColumn,
    )

    from gpsav.runner import run as run_experiment

    console = _console()
    try:
        config = _resolve_config(config_path, preset, overrides)
    except GpSavError as e:
        _fail(console, e)

    n_steps, _ = config.step_count()
    if not quiet:
        console.print(f"[bold green]🚀 gpsav v{__version__}[/bold green]")
        console.print(f"[dim]🧮 Grid:[/dim] {config.dim}D {config.sizes} on {config.lower}..{config.upper}")
        console.print(f"[dim]⏱️  Steps:[/dim] {n_steps} x tau={config.tau} (s={config.stages})")
        console.print(f"[dim]⚛️  Model:[/dim] beta={config.beta}, omega={config.omega}")

    try:
        if quiet:
            result = run_experiment(config, output_dir=output)
        else:
            progress = Progress(
                SpinnerColumn(),
                TextColumn("[bold blue]stepping"),
                BarColumn(),
                MofNCompleteColumn(),
                TimeRemainingColumn(),
                console=console,
            )
            with progress:
                task_id = progress.add_task("stepping", total=max(n_steps, 1))

                def on_step(index: int, total: int):
                    progress.update(task_id, completed=index)

                result = run_experiment(config, output_dir=output, on_step=on_step)
    except (GpSavError, OSError) as e:
        _fail(console, e)

    for warning in result.warnings:
        console.print(f"[yellow]⚠️  {warning}[/yellow]")
    if not quiet:
        console.print("\n[bold green]✅ Run complete![/bold green]")
        console.print(f"[dim]📁 Output:[/dim] {result.output_dir}")
        console.print(f"[dim]⏱️  Time:[/dim] {format_time(result.elapsed)}")
        if len(result.series):
            console.print(f"[dim]📊 max mass_err:[/dim] {format_error(result.series.max_mass_err)}")
            console.print(f"[dim]📊 max quad_err:[/dim] {format_error(result.series.max_quad_err)}")
            console.print(f"[dim]📊 max ham_err:[/dim] {format_error(result.series.max_ham_err)}")


def _parse_ladder(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated step sizes, got {text!r}")


@cli.command()
@config_options
@click.option(
    "-l", "--ladder", default="0.02,0.015,0.01,0.005", show_default=True,
    help="Comma-separated decreasing step sizes",
)
@click.option("-b", "--beta", "betas", multiple=True, type=float, help="Interaction strength (repeatable)")
@click.option("-o", "--output", help="Directory for convergence.csv")
def converge(
    config_path: Optional[str],
    preset: Optional[str],
    overrides,
    ladder: str,
    betas: tuple[float, ...],
    output: Optional[str],
):
    """Temporal self-convergence study against an s=3 reference run"""
    from rich.table import Table

    from gpsav.runner import convergence_study

    console = _console()
    tau_ladder = _parse_ladder(ladder)
    try:
        config = _resolve_config(config_path, preset, overrides)
    except GpSavError as e:
        _fail(console, e)

    console.print(f"[bold green]🚀 gpsav v{__version__}[/bold green]")
    console.print(f"[dim]📐 Ladder:[/dim] {', '.join(str(t) for t in tau_ladder)} (s={config.stages})")

    def on_rung(row):
        console.print(f"[dim]  beta={row.beta:g} tau={row.tau:g}: {format_error(row.error)}[/dim]")

    try:
        table = convergence_study(
            config,
            tau_ladder,
            betas=list(betas) or None,
            output_dir=Path(output or config.output_dir),
            on_rung=on_rung,
        )
    except InvalidArgumentError as e:
        raise click.BadParameter(str(e), param_hint="'--ladder'")
    except (GpSavError, OSError) as e:
        _fail(console, e)

    view = Table(title=f"Max-norm errors, s={table.stages} (reference s={table.reference_stages}, tau={table.reference_tau:g})")
    view.add_column("beta", style="cyan")
    view.add_column("", style="dim")
    for tau in table.ladder:
        view.add_column(f"tau={tau:g}", style="green")
    for beta in table.betas:
        rows = table.for_beta(beta)
        view.add_row(f"{beta:g}", "error", *(format_error(row.error) for row in rows))
        view.add_row(
            "", "rate", *("-" if row.rate is None else f"{row.rate:.2f}" for row in rows)
        )
        view.add_row("", "time", *(format_time(row.seconds) for row in rows))
    console.print(view)


@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
def inspect(path: str):
    """Print a snapshot header and a short summary of its field"""
    from rich.table import Table

    from gpsav.core.grid import max_norm, norm
    from gpsav.storage import read_snapshot

    console = _console()
    try:
        snapshot = read_snapshot(Path(path))
    except (GpSavError, OSError) as e:
        _fail(console, e)

    grid = snapshot.grid
    density = np.abs(snapshot.psi.values) ** 2
    peak = np.unravel_index(int(np.argmax(density)), grid.shape)
    # grid.shape is slowest-first; report coordinates as (x, y, z)
    location = tuple(
        float(grid.coords[axis][peak[grid.dim - 1 - axis]]) for axis in range(grid.dim)
    )

    table = Table(title=f"Snapshot {Path(path).name}")
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("dim", str(grid.dim))
    table.add_row("sizes", ", ".join(str(n) for n in grid.sizes))
    table.add_row("lower", ", ".join(f"{a:g}" for a in grid.lower))
    table.add_row("upper", ", ".join(f"{b:g}" for b in grid.upper))
    table.add_row("time", f"{snapshot.time:g}")
    table.add_row("q", f"{snapshot.q:.12g}")
    table.add_row("mass", f"{norm(snapshot.psi) ** 2:.12g}")
    table.add_row("max |psi|", f"{max_norm(snapshot.psi):.6g}")
    table.add_row("peak density at", ", ".join(f"{c:g}" for c in location))
    console.print(table)


@cli.command()
@click.argument("name", required=False)
def presets(name: Optional[str]):
    """List presets, or print one as a config file"""
    from rich.table import Table

    console = _console()
    if name:
        if name not in PRESETS:
            _fail(console, ConfigError(f"unknown preset {name!r}"))
        click.echo(load_preset(name).to_text(), nl=False)
        return

    table = Table(title="Presets")
    table.add_column("Name", style="cyan")
    table.add_column("Description", style="white")
    for preset_name, text in PRESETS.items():
        first = text.splitlines()[0].lstrip("# ").strip()
        table.add_row(preset_name, first)
    console.print(table)


@cli.command()
def initials():
    """List available initial-data kinds"""
    from rich.table import Table

    from gpsav.initial import get_registry

    console = _console()
    table = Table(title="Initial Data")
    table.add_column("Name", style="cyan")
    table.add_column("Description", style="white")
    for info in get_registry().list_builders():
        table.add_row(info["name"], info["description"])
    console.print(table)


if __name__ == "__main__":
    cli()
