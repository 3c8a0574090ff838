from pathlib import Path
from typing import Annotated, Optional
import logging

import typer

from rtann.benchmark.services import run_benchmark
from rtann.config import config
from rtann.dataset.services import kfold, load_csv, split
from rtann.views import (
    BetaOption,
    DataOption,
    HiddenCountOption,
    LearningRateOption,
    MaxEpochsOption,
    MaxLeavesOption,
    MinsplitOption,
    PlsComponentsOption,
    ResponseBoundOption,
    SeedOption,
    SelectionOption,
    TargetOption,
    WorkersOption,
    fit_options,
    handle_errors,
)

logger = logging.getLogger(__name__)


def benchmark(
    data: DataOption,
    target: TargetOption,
    test_fraction: Annotated[
        Optional[float],
        typer.Option(help="Holdout share (default 0.3 unless --folds)"),
    ] = None,
    folds: Annotated[
        Optional[int], typer.Option(help="K-fold cross-validation instead")
    ] = None,
    output_dir: Annotated[
        Optional[Path],
        typer.Option(help="Write in-sample and holdout tables as CSV here"),
    ] = None,
    response_bound: ResponseBoundOption = None,
    seed: SeedOption = config.DEFAULT_SEED,
    workers: WorkersOption = config.WORKERS,
    minsplit_fraction: MinsplitOption = config.MINSPLIT_FRACTION,
    max_leaves: MaxLeavesOption = None,
    selection: SelectionOption = "used",
    hidden_count: HiddenCountOption = "auto",
    beta: BetaOption = "auto",
    learning_rate: LearningRateOption = config.LEARNING_RATE,
    max_epochs: MaxEpochsOption = config.MAX_EPOCHS,
    pls_components: PlsComponentsOption = None,
):
    """Compare OLS, stepwise, PLS, tree, network and hybrid on one file."""

    if test_fraction is not None and folds is not None:
        raise typer.BadParameter(
            "use either --test-fraction or --folds, not both"
        )

    with handle_errors():
        options = fit_options(
            seed,
            minsplit_fraction,
            max_leaves,
            selection,
            hidden_count,
            beta,
            learning_rate,
            max_epochs,
            pls_components,
        )
        ds = load_csv(data, target, response_bound)
        if folds is not None:
            plans = kfold(ds, folds, seed)
        else:
            plans = [split(ds, test_fraction or config.TEST_FRACTION, seed)]

        result = run_benchmark(ds, plans, options, workers)
        in_sample = result.table("in_sample")
        holdout = result.table("holdout")

        typer.echo("In-sample")
        typer.echo(in_sample.text)
        typer.echo(f"Held-out ({result.protocol})")
        typer.echo(holdout.text, nl=False)
        for scores in result.scores:
            if scores.error is not None:
                typer.echo(f"{scores.kind.value} failed: {scores.error}")

        if output_dir is not None:
            output_dir.mkdir(parents=True, exist_ok=True)
            (output_dir / "in_sample.csv").write_text(
                in_sample.csv, encoding="utf-8"
            )
            (output_dir / "holdout.csv").write_text(
                holdout.csv, encoding="utf-8"
            )
            logger.info(f"Wrote benchmark tables to {output_dir}")
