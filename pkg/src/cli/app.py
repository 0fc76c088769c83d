"""cogfeed command-line interface."""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import pandas as pd
import typer
from rich.console import Console
from rich.table import Table

from src.analysis import optimal_bit_allocation
from src.cli.experiments import allocation_table, empirical_allocations, run_experiment
from src.cli.specs import ExperimentKind, ExperimentSpec, ParamOverrides, SweepGrid
from src.sim import distribution_checks, sweep
from src.utils.errors import CogfeedError
from src.utils.logging_config import get_logger, setup_logging

logger = get_logger(__name__)
console = Console()

app = typer.Typer(
    name="cogfeed",
    help="Cognitive beamforming with finite-rate cooperative feedback: simulation and analysis.",
    no_args_is_help=True,
)


@dataclass
class RunOptions:
    """Global options shared by every command."""

    seed: Optional[int] = None
    workers: Optional[int] = None
    out_dir: Optional[Path] = None


def _table(frame: pd.DataFrame, title: str, columns: Optional[list] = None) -> Table:
    table = Table(title=title)
    columns = columns or list(frame.columns)
    for column in columns:
        table.add_column(column)
    for _, row in frame[columns].iterrows():
        table.add_row(*[f"{value:.4g}" if isinstance(value, float) else str(value) for value in row])
    return table


def _fail(exc: Exception) -> None:
    console.print(f"[red]Error:[/red] {exc}")
    raise typer.Exit(code=1)


@app.callback()
def main(
    ctx: typer.Context,
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed overriding the spec"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker processes (default: COGFEED_WORKERS or cores)"),
    out_dir: Optional[Path] = typer.Option(None, "--out-dir", help="Output directory (default: COGFEED_OUT_DIR)"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
):
    """Global options."""
    try:
        setup_logging(level=log_level)
    except CogfeedError as exc:
        _fail(exc)
    ctx.obj = RunOptions(seed=seed, workers=workers, out_dir=out_dir)


@app.command("run")
def run(
    ctx: typer.Context,
    spec_path: Path = typer.Argument(..., exists=True, dir_okay=False, help="Experiment spec JSON"),
):
    """Run an experiment spec and write results, overlay and manifest."""
    options: RunOptions = ctx.obj or RunOptions()
    try:
        spec = ExperimentSpec.load(spec_path)
        logger.debug(f"Loaded spec {spec.name} from {spec_path}")
        if options.seed is not None:
            spec = spec.with_updates(master_seed=options.seed)
        result = run_experiment(spec, workers=options.workers, out_dir=options.out_dir)
    except (CogfeedError, OSError) as exc:
        _fail(exc)
        return

    frame = result.results
    shown = [c for c in ("mode", "feedforward", "gamma_max_db", "b_cdi", "a_ipc", "su_outage", "ci", "pu_outage") if c in frame]
    console.print(_table(frame, f"{spec.name} ({spec.kind.value})", shown or None))
    for name, path in result.paths.items():
        console.print(f"{name}: {path}")


@app.command("allocate-bits")
def allocate_bits(
    ctx: typer.Context,
    total: int = typer.Option(12, "--total", min=1, help="Total cooperative feedback bits F = A + B"),
    empirical: bool = typer.Option(False, "--empirical", help="Also find the Monte Carlo argmin"),
    gamma_p_db: float = typer.Option(10.0, "--gamma-p-db"),
    gamma_max_db: float = typer.Option(10.0, "--gamma-max-db"),
    trials: int = typer.Option(100_000, "--trials", min=1, help="Trials per A for --empirical"),
):
    """Print the analytic IPC/CDI bit split and the J(B) curve."""
    options: RunOptions = ctx.obj or RunOptions()
    try:
        spec = ExperimentSpec.create(
            name="allocate-bits",
            kind=ExperimentKind.FIGURE6,
            overrides=ParamOverrides(gamma_p_db=gamma_p_db, gamma_max_db=gamma_max_db),
            grid=SweepGrid(gamma_max_db=[gamma_max_db]),
            total_bits=total,
            n_trials=trials,
            master_seed=options.seed or 0,
        )
        allocation = optimal_bit_allocation(total, spec.base_params())
    except CogfeedError as exc:
        _fail(exc)
        return

    console.print(_table(allocation_table(allocation), f"J(B) for F = {total}"))
    console.print(
        f"chi = {allocation.chi:.6g}, B* = {allocation.b_continuous:.3f} -> "
        f"(A*, B*) = ({allocation.a_bits}, {allocation.b_bits})"
    )
    if empirical:
        results = sweep(spec.trial_grid(), workers=options.workers)
        for summary in empirical_allocations(spec, results):
            console.print(
                f"Monte Carlo argmin A = {summary['a_star_empirical']} "
                f"(outage {summary['su_outage_min']:.4g}, {trials} trials per A)"
            )


@app.command("validate")
def validate(
    ctx: typer.Context,
    samples: int = typer.Option(100_000, "--samples", min=1000),
    b_cdi: int = typer.Option(12, "--b-cdi", min=0),
    antennas: int = typer.Option(4, "--antennas", min=3),
):
    """KS checks of the channel and quantization-error laws."""
    options: RunOptions = ctx.obj or RunOptions()
    try:
        params = ParamOverrides(b_cdi=b_cdi, antennas=antennas).to_params()
        table = distribution_checks(params, n_samples=samples, seed=options.seed or 0)
    except CogfeedError as exc:
        _fail(exc)
        return
    console.print(_table(table, "Distribution checks"))
    if not table["passed"].all():
        raise typer.Exit(code=1)
