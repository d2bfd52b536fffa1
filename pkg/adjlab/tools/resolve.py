"""
Resolution command.
"""

import typer

from ..services.pipeline_service import get_pipeline_service
from ..utils.exceptions import AdjlabException, report_cli_error
from .common import FormatOption, InputOption, MaxStepsOption, OutputFormat, OutputOption, emit


def resolve_command(
    input: InputOption,
    output: OutputOption = None,
    max_steps: MaxStepsOption = None,
    fmt: FormatOption = OutputFormat.JSON,
) -> None:
    """
    Resolve V and print the tree with its divisors (m, k) and cross-checks.
    """
    try:
        result = get_pipeline_service().run_resolve(input, max_steps=max_steps)
        emit(result, output, fmt)
    except AdjlabException as e:
        raise typer.Exit(report_cli_error(e)) from e
