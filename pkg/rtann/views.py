"""Option types and error handling shared by the command views."""

from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Optional
import logging

import pydantic
import typer

from rtann.errors import RtannError
from rtann.estimators.models import FitOptions

logger = logging.getLogger(__name__)

DataOption = Annotated[
    Path, typer.Option("--data", help="Headed CSV file of decimal numbers")
]
TargetOption = Annotated[
    str, typer.Option("--target", help="Name of the response column")
]
SeedOption = Annotated[int, typer.Option(help="Seed for every random step")]
WorkersOption = Annotated[
    int, typer.Option(help="Threads for independent fits")
]
ResponseBoundOption = Annotated[
    Optional[float],
    typer.Option(help="Response bound K; defaults to ceil(max |target|)"),
]
MinsplitOption = Annotated[
    float, typer.Option(help="Tree: smallest splittable node, share of n")
]
MaxLeavesOption = Annotated[
    Optional[int], typer.Option(help="Tree: leaf budget")
]
SelectionOption = Annotated[
    str, typer.Option(help="Hybrid: feature selection, 'used' or 'top-<m>'")
]
HiddenCountOption = Annotated[
    str, typer.Option(help="Network: hidden width or 'auto'")
]
BetaOption = Annotated[
    str, typer.Option(help="Network: output weight bound or 'auto'")
]
LearningRateOption = Annotated[
    float, typer.Option(help="Network: gradient descent step")
]
MaxEpochsOption = Annotated[int, typer.Option(help="Network: epoch budget")]
PlsComponentsOption = Annotated[
    Optional[int], typer.Option(help="PLS: components, default min(2, p)")
]


def fit_options(
    seed: int,
    minsplit_fraction: float,
    max_leaves: int | None,
    selection: str,
    hidden_count: str,
    beta: str,
    learning_rate: float,
    max_epochs: int,
    pls_components: int | None,
) -> FitOptions:
    return FitOptions(
        seed=seed,
        minsplit_fraction=minsplit_fraction,
        max_leaves=max_leaves,
        selection=selection,
        hidden_count=hidden_count,
        beta=beta,
        learning_rate=learning_rate,
        max_epochs=max_epochs,
        pls_components=pls_components,
    )


def _describe(error: Exception) -> str:
    if isinstance(error, pydantic.ValidationError):
        first = error.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        return f"{location}: {first['msg']}" if location else first["msg"]
    return str(error)


@contextmanager
def handle_errors():
    """Turn a failed operation into a one-line diagnostic and exit 1"""

    try:
        yield
    except (RtannError, pydantic.ValidationError, OSError) as e:
        message = _describe(e)
        logger.debug(f"Command failed: {message}", exc_info=True)
        typer.echo(f"error: {message}", err=True)
        raise typer.Exit(code=1)


def write_output(text: str, output: Path | None) -> None:
    """Write to ``output`` or, without one, to stdout"""

    if output is None:
        typer.echo(text, nl=False)
        return
    output.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {output}")

