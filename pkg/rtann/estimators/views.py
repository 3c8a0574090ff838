from pathlib import Path
from typing import Annotated, Optional
import io
import logging

import pandas as pd
import typer

from rtann.config import config
from rtann.dataset.services import load_csv, read_feature_rows, split
from rtann.estimators.models import ModelKind
from rtann.estimators.services import get_estimator, load_model, save_model
from rtann.metrics.services import comparison_table, evaluate as score
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
    fit_options,
    handle_errors,
    write_output,
)

logger = logging.getLogger(__name__)

ModelOption = Annotated[
    Path, typer.Option("--model", help="Model file written by train")
]
OutputOption = Annotated[
    Optional[Path], typer.Option(help="Write here instead of stdout")
]


def train(
    data: DataOption,
    target: TargetOption,
    kind: Annotated[ModelKind, typer.Option(help="Model kind to fit")],
    model_out: Annotated[
        Path, typer.Option(help="Where to write the model file")
    ],
    report_out: OutputOption = None,
    test_fraction: Annotated[
        Optional[float],
        typer.Option(help="Hold out this share of rows and score on it"),
    ] = None,
    response_bound: ResponseBoundOption = None,
    seed: SeedOption = config.DEFAULT_SEED,
    minsplit_fraction: MinsplitOption = config.MINSPLIT_FRACTION,
    max_leaves: MaxLeavesOption = None,
    selection: SelectionOption = "used",
    hidden_count: HiddenCountOption = "auto",
    beta: BetaOption = "auto",
    learning_rate: LearningRateOption = config.LEARNING_RATE,
    max_epochs: MaxEpochsOption = config.MAX_EPOCHS,
    pls_components: PlsComponentsOption = None,
):
    """Fit one model, save it and write its report."""

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
        train_ds, test_ds = ds, None
        if test_fraction is not None:
            plan = split(ds, test_fraction, seed)
            train_ds = ds.subset(plan.train_indices)
            test_ds = ds.subset(plan.test_indices)

        estimator = get_estimator(kind)
        model = estimator.fit(train_ds, options)
        save_model(model_out, kind, model, train_ds)

        k = estimator.predictor_count(model)
        rows = [
            (
                "in-sample",
                score(
                    train_ds.targets,
                    estimator.predict_rows(model, train_ds.features),
                    k,
                ),
            )
        ]
        if test_ds is not None:
            rows.append(
                (
                    "holdout",
                    score(
                        test_ds.targets,
                        estimator.predict_rows(model, test_ds.features),
                        k,
                    ),
                )
            )

        report = (
            f"model: {kind.value}\n"
            f"training rows: {train_ds.n}\n"
            + estimator.describe(model, train_ds.feature_names)
            + comparison_table(rows).text
        )
        write_output(report, report_out)


def predict(
    model: ModelOption,
    data: DataOption,
    output: OutputOption = None,
):
    """Predict every row of a CSV whose columns match the model by name."""

    with handle_errors():
        document, fitted = load_model(model)
        rows = read_feature_rows(
            data, document.columns, ignore=[document.target]
        )
        predictions = get_estimator(document.kind).predict_rows(fitted, rows)

        buffer = io.StringIO()
        pd.DataFrame({"prediction": predictions}).to_csv(
            buffer, index=False, lineterminator="\n"
        )
        write_output(buffer.getvalue(), output)
        logger.info(f"Predicted {len(predictions)} rows")


def evaluate(
    model: ModelOption,
    data: DataOption,
    output: Annotated[
        Optional[Path], typer.Option(help="Also write the table as CSV")
    ] = None,
):
    """Score a saved model on a CSV that includes the response column."""

    with handle_errors():
        document, fitted = load_model(model)
        values = read_feature_rows(
            data, [*document.columns, document.target]
        )
        estimator = get_estimator(document.kind)
        report = score(
            values[:, -1],
            estimator.predict_rows(fitted, values[:, :-1]),
            estimator.predictor_count(fitted),
        )
        table = comparison_table([(document.kind.value, report)])
        typer.echo(table.text, nl=False)
        if output is not None:
            output.write_text(table.csv, encoding="utf-8")
            logger.info(f"Wrote {output}")
