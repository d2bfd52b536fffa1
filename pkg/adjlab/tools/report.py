"""
Full pipeline report command.
"""

import typer
from loguru import logger

from ..services.pipeline_service import get_pipeline_service, has_disagreement
from ..utils.exceptions import AdjlabException, report_cli_error
from .common import (
    DegreeBoundOption,
    FormatOption,
    InputOption,
    MaxStepsOption,
    OutputFormat,
    OutputOption,
    SamplesOption,
    SeedOption,
    ShellsOption,
    emit,
)


def report_command(
    input: InputOption,
    output: OutputOption = None,
    seed: SeedOption = None,
    shells: ShellsOption = None,
    samples: SamplesOption = None,
    degree_bound: DegreeBoundOption = None,
    max_steps: MaxStepsOption = None,
    fmt: FormatOption = OutputFormat.JSON,
) -> None:
    """
    Run every stage and print the full report.

    Exits with code 1 when an exact and a numerical verdict disagree.
    """
    try:
        result = get_pipeline_service().run_pipeline(
            input,
            seed=seed,
            shells=shells,
            samples=samples,
            degree_bound=degree_bound,
            max_steps=max_steps,
        )
        emit(result, output, fmt)
    except AdjlabException as e:
        raise typer.Exit(report_cli_error(e)) from e
    if has_disagreement(result):
        logger.warning("Disagreement in the agreement matrix")
        raise typer.Exit(1)
