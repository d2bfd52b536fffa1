"""
Residue adjunction command.
"""

import typer

from ..services.pipeline_service import get_pipeline_service
from ..utils.exceptions import AdjlabException, report_cli_error
from .common import FormatOption, InputOption, MaxStepsOption, OutputFormat, OutputOption, SeedOption, emit


def adjunct_command(
    input: InputOption,
    output: OutputOption = None,
    seed: SeedOption = None,
    max_steps: MaxStepsOption = None,
    fmt: FormatOption = OutputFormat.JSON,
) -> None:
    """
    Residue forms of g dz / f with identity checks and index-independence checks.
    """
    try:
        result = get_pipeline_service().run_adjunct(input, seed=seed, max_steps=max_steps)
        emit(result, output, fmt)
    except AdjlabException as e:
        raise typer.Exit(report_cli_error(e)) from e
