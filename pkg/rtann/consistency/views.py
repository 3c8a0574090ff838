from enum import Enum
from pathlib import Path
from typing import Annotated

import typer

from rtann.config import config
from rtann.consistency.models import SweepSpec
from rtann.consistency.services import (
    run_mlp_sweep,
    run_tree_sweep,
    trend_verdict,
)
from rtann.views import SeedOption, WorkersOption, handle_errors, write_output


class SweepKind(str, Enum):
    tree = "tree"
    mlp = "mlp"


class Schedule(str, Enum):
    sublog = "sublog"
    linear_violation = "linear-violation"


def parse_sizes(text: str) -> list[int]:
    """Comma separated, strictly ascending sample sizes of at least 10"""

    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"sizes must be integers, got '{text}'")
    if not sizes:
        raise typer.BadParameter("give at least one size")
    if any(n < 10 for n in sizes):
        raise typer.BadParameter("every size must be at least 10")
    if any(a >= b for a, b in zip(sizes, sizes[1:])):
        raise typer.BadParameter(
            f"sizes must be strictly ascending, got {text}"
        )
    return sizes


def sweep(
    output: Annotated[Path, typer.Option(help="CSV file for the records")],
    kind: Annotated[
        SweepKind, typer.Option(help="Fit trees or networks")
    ] = SweepKind.tree,
    generator: Annotated[str, typer.Option()] = "axis-steps",
    sizes: Annotated[
        str, typer.Option(help="Ascending sample sizes, e.g. 200,800,3200")
    ] = "200,800,3200",
    schedule: Annotated[
        Schedule, typer.Option(help="Tree leaf budget growth")
    ] = Schedule.sublog,
    repeats: Annotated[int, typer.Option()] = config.SWEEP_REPEATS,
    noise_sd: Annotated[float, typer.Option()] = 1.0,
    max_epochs: Annotated[int, typer.Option()] = config.MAX_EPOCHS,
    seed: SeedOption = config.DEFAULT_SEED,
    workers: WorkersOption = config.WORKERS,
):
    """Measure holdout risk as n grows and print the trend verdict."""

    parsed = parse_sizes(sizes)
    with handle_errors():
        spec = SweepSpec(
            generator=generator,
            sizes=parsed,
            schedule=schedule.value,
            repeats=repeats,
            noise_sd=noise_sd,
            max_epochs=max_epochs,
            seed=seed,
        )
        run = run_tree_sweep if kind == SweepKind.tree else run_mlp_sweep
        result = run(spec, workers)
        write_output(result.to_csv(), output)
        for n, median in result.median_holdout().items():
            typer.echo(f"n={n}: median holdout risk {median:.6g}")
        typer.echo(f"verdict: {trend_verdict(result)}")
