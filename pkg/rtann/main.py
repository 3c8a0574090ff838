from pathlib import Path
from typing import Annotated, Optional
import logging

import typer

from rtann.benchmark.views import benchmark
from rtann.config import config, read_config_file
from rtann.consistency.views import sweep
from rtann.dataset.views import synth
from rtann.errors import ConfigurationError
from rtann.estimators.views import evaluate, predict, train

app = typer.Typer(
    name="rtann",
    help="Hybrid regression tree and neural network toolkit.",
    no_args_is_help=True,
    add_completion=False,
    pretty_exceptions_show_locals=False,
)


@app.callback()
def main(
    ctx: typer.Context,
    config_file: Annotated[
        Optional[Path],
        typer.Option(
            "--config",
            help="key=value file supplying defaults for command options",
        ),
    ] = None,
    debug: Annotated[bool, typer.Option(help="Log at DEBUG level")] = False,
):
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.INFO,
        format=config.LOG_FORMAT,
        force=True,
    )

    if config_file is not None:
        try:
            values = read_config_file(config_file)
        except ConfigurationError as e:
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(code=1)
        # Flags on the command line still win over these defaults
        ctx.default_map = {name: values for name in ctx.command.commands}


app.command()(train)
app.command()(predict)
app.command()(evaluate)
app.command()(benchmark)
app.command()(sweep)
app.command()(synth)


if __name__ == "__main__":
    app()
