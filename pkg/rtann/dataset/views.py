from pathlib import Path
from typing import Annotated
import logging

import typer

from rtann.config import config
from rtann.dataset.models import SynthSpec
from rtann.dataset.services import synthesize, write_csv
from rtann.views import SeedOption, handle_errors

logger = logging.getLogger(__name__)


def synth(
    output: Annotated[Path, typer.Option(help="CSV file to write")],
    generator: Annotated[
        str,
        typer.Option(help="axis-steps, friedman-like or linear"),
    ] = "axis-steps",
    n: Annotated[int, typer.Option("--n", help="Number of rows")] = 200,
    noise_sd: Annotated[
        float, typer.Option(help="Standard deviation of the Gaussian noise")
    ] = 0.0,
    seed: SeedOption = config.DEFAULT_SEED,
):
    """Write a synthetic dataset; the response column is named y."""

    with handle_errors():
        ds = synthesize(
            SynthSpec(generator=generator, n=n, noise_sd=noise_sd, seed=seed)
        )
        write_csv(ds, output)
        logger.info(f"Wrote {ds.n} rows from {generator} to {output}")
