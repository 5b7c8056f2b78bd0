"""
MAPFlow Command Line
click command group with rich console output
"""

import logging
import shlex
from dataclasses import fields, replace
from pathlib import Path
from typing import List, Optional, Sequence

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from core import export
from core.analysis import METRIC_COLUMNS, pareto_front, rank
from core.dynamics import Trajectory
from core.errors import MapError, ValidationError
from core.metrics import MetricsRecord, peak_agent
from core.settings import (ALL_ARCHITECTURES, OUTPUT_FORMATS, TAU_RULE_NAMES,
                           RunConfig, SettingsManager)
from core.suite import run_all, run_reference_suite, run_single, run_trajectory
from core.topology import (ArchitectureKind, ArchitectureSpec, build_architecture, catalog,
                           link_census)
from ui.themes import DEFAULT_THEME, THEMES

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

RUN_FIELDS = tuple(f.name for f in fields(RunConfig))


def setup_logging(verbose: bool = False):
    """Route log records through rich on stderr"""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def run_options(func):
    """Flags shared by every command that builds a RunConfig"""
    options = [
        click.option('--arch', default=None, help="Architecture code (P, PDO, ..., SA) or ALL."),
        click.option('--agents', 'n_agents', type=int, default=None, help="Number of agents N."),
        click.option('--s', type=float, default=None, help="Fraction an agent keeps each step."),
        click.option('--f', type=float, default=None, help="Fraction an agent forwards each step."),
        click.option('--b', type=float, default=None, help="Resource supply rate."),
        click.option('--w', type=float, default=None, help="Work conversion factor."),
        click.option('--steps', type=int, default=None, help="Simulation horizon T."),
        click.option('--threshold', type=float, default=None, help="Transition-time threshold."),
        click.option('--out', default=None, help="Output path (console when omitted)."),
        click.option('--format', 'format', type=click.Choice(OUTPUT_FORMATS), default=None,
                     help="Output format."),
        click.option('--tau-rule', 'tau_rule', type=click.Choice(TAU_RULE_NAMES), default=None,
                     help="lead: first agent to cross; all: every agent."),
        click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
                     default=None, help="JSON settings file with default values."),
        click.option('--dump-config', is_flag=True, help="Print the effective flags and exit."),
        click.option('--save-config', 'save_config', type=click.Path(dir_okay=False), default=None,
                     help="Write the effective settings as JSON for later --config use."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def config_from_options(params: dict) -> RunConfig:
    """Defaults, then the --config file, then explicit flags"""
    config_path = params.get('config_path')
    base = SettingsManager(config_path).settings if config_path else RunConfig()
    overrides = {name: params[name] for name in RUN_FIELDS if params.get(name) is not None}
    config = replace(base, **overrides)
    logger.debug("run config: %s", config)
    return config


def parse_run_config(argv: Sequence[str]) -> RunConfig:
    """RunConfig described by a list of run flags"""
    ctx = simulate.make_context('simulate', list(argv))
    return config_from_options(ctx.params)


def _prepare(params: dict) -> Optional[RunConfig]:
    config = config_from_options(params)
    if params.get('save_config'):
        SettingsManager(params['save_config'], settings=config).save()
        logger.info("saved settings to %s", params['save_config'])
    if params.get('dump_config'):
        click.echo(shlex.join(config.to_flags()))
        return None
    return config


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _metrics_table(records: Sequence[MetricsRecord], title: str = "Metrics") -> Table:
    n_agents = max(r.n_agents for r in records)
    table = Table(title=title)
    table.add_column("Arch", style="bold")
    table.add_column("s", justify="right")
    table.add_column("f", justify="right")
    table.add_column("W_T", justify="right")
    table.add_column("sigma_x", justify="right")
    table.add_column("tau", justify="right")
    for i in range(1, n_agents + 1):
        table.add_column(f"W_{i}", justify="right")
    table.add_column("peak", justify="right")
    for r in records:
        table.add_row(r.label, f"{r.s:g}", f"{r.f:g}", _fmt(r.total_work), _fmt(r.dispersion),
                      str(r.transition_time), *[_fmt(w) for w in r.per_agent_work],
                      str(peak_agent(r)))
    return table


def _trajectories(config: RunConfig) -> List[Trajectory]:
    """Single runs write their own output; ALL treats --out as a directory"""
    if config.arch.upper() != ALL_ARCHITECTURES:
        return [run_trajectory(config)]
    out = Path(config.out) if config.out else None
    trajectories = []
    for kind in ArchitectureKind:
        target = str(out / f"traj_{kind.value}.{config.format}") if out else ""
        trajectories.append(run_trajectory(replace(config, arch=kind.value, out=target)))
    return trajectories


@click.group()
@click.option('-v', '--verbose', is_flag=True, help="Debug logging.")
def cli(verbose: bool):
    """MAPFlow - multi-agent production flow simulator"""
    setup_logging(verbose)


@cli.command('list')
@click.option('--agents', 'n_agents', type=int, default=5, show_default=True)
def list_architectures(n_agents: int):
    """Show the architecture catalog and its link counts"""
    table = Table(title=f"Architectures (N={n_agents})")
    for column in ("Code", "Source", "Links", "Chain", "Source links", "Agent links", "Description"):
        table.add_column(column)
    for info in catalog():
        system = build_architecture(ArchitectureSpec(info.code, n_agents), 0.8, 0.1)
        census = link_census(system)
        table.add_row(info.code, info.source_mode, info.links, info.chain,
                      str(census.source_links), str(census.agent_links), info.description)
    console.print(table)


@cli.command()
@run_options
def simulate(**params):
    """Simulate trajectories (CSV on stdout unless --out is given)"""
    config = _prepare(params)
    if config is None:
        return
    trajectories = _trajectories(config)
    if config.out:
        console.print(f"Wrote {len(trajectories)} trajectory file(s) to {config.out}")
        return
    for trajectory in trajectories:
        if len(trajectories) > 1:
            click.echo(f"# {trajectory.system.code}")
        click.echo(','.join(export.trajectory_header(trajectory.states.shape[1])))
        for row in export.trajectory_rows(trajectory):
            click.echo(','.join(row))


@cli.command()
@run_options
@click.option('--sort', 'sort_by', type=click.Choice(METRIC_COLUMNS), default=None,
              help="Order rows by one metric.")
@click.option('--descending', is_flag=True, help="Sort from largest to smallest.")
def metrics(sort_by: Optional[str], descending: bool, **params):
    """Compute W_T, sigma_x and tau per architecture"""
    config = _prepare(params)
    if config is None:
        return
    records = [run.record for run in run_all(replace(config, out=""))]
    if sort_by:
        records = rank(records, sort_by, ascending=not descending)
    console.print(_metrics_table(records))
    if config.out:
        if config.format == "svg":
            from ui.plots import plot_work
            plot_work(records, config.out)
        else:
            export.write_metrics(records, config.out)
        console.print(f"Wrote {config.out}")


@cli.command()
@run_options
@click.option('--workers', type=int, default=4, show_default=True, help="Concurrent runs.")
def suite(workers: int, **params):
    """Run all 22 architecture/configuration pairs and the PCA"""
    config = _prepare(params)
    if config is None:
        return
    output_dir = config.out or "results"
    result = run_reference_suite(output_dir, base=config, workers=workers)
    console.print(_metrics_table(result.records, title="Reproduction suite"))
    front = ", ".join(r.label for r in pareto_front(result.records))
    console.print(f"Pareto front: {front}")
    console.print(f"PC1+PC2 explain {100 * result.pca.explained_2d:.2f}% of the variance")
    console.print(f"Wrote metrics.csv, pca.csv and {len(result.runs)} trajectories to {output_dir}")


@cli.command()
@run_options
def pca(**params):
    """Principal components of the suite's metrics table"""
    config = _prepare(params)
    if config is None:
        return
    result = run_reference_suite(None, base=replace(config, out="")).pca

    table = Table(title="Loadings")
    table.add_column("Metric", style="bold")
    for k in range(result.loadings.shape[0]):
        table.add_column(f"PC{k + 1}", justify="right")
    for name, row in zip(METRIC_COLUMNS, result.loadings.T):
        table.add_row(name, *[_fmt(v) for v in row])
    table.add_row("explained", *[_fmt(r) for r in result.explained_variance_ratio])
    console.print(table)

    if config.out:
        if config.format == "svg":
            from ui.plots import plot_pca
            plot_pca(result, config.out)
        else:
            export.write_pca(result, config.out)
        console.print(f"Wrote {config.out}")


@cli.command()
@run_options
@click.option('--kind', type=click.Choice(("trajectory", "work", "pca")), default="trajectory",
              show_default=True)
@click.option('--theme', 'theme_id', type=click.Choice(sorted(THEMES)), default=DEFAULT_THEME,
              show_default=True)
def plot(kind: str, theme_id: str, **params):
    """Render an SVG figure to --out"""
    config = _prepare(params)
    if config is None:
        return
    if not config.out:
        raise ValidationError("plot needs an output path", flag="--out")

    from ui.plots import emit_plot
    quiet = replace(config, out="")
    if kind == "trajectory":
        run = run_single(quiet)
        emit_plot(run.trajectory, config.out, record=run.record, theme_id=theme_id)
    elif kind == "work":
        records = [run.record for run in run_all(quiet)]
        emit_plot(records, config.out, theme_id=theme_id)
    else:
        emit_plot(run_reference_suite(None, base=quiet).pca, config.out, theme_id=theme_id)
    console.print(f"Wrote {config.out}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and map failures onto exit codes"""
    try:
        code = cli.main(args=list(argv) if argv is not None else None,
                        prog_name="mapflow", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_VALIDATION
    except click.Abort:
        return EXIT_VALIDATION
    except OSError as e:
        err_console.print(f"Error: {e}", markup=False, highlight=False, soft_wrap=True)
        return EXIT_IO
    except (MapError, ValueError) as e:
        err_console.print(f"Error: {e}", markup=False, highlight=False, soft_wrap=True)
        return EXIT_VALIDATION
    return code if isinstance(code, int) else EXIT_OK
