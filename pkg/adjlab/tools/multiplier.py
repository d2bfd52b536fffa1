"""
Multiplier ideal command.
"""

import typer

from ..services.pipeline_service import get_pipeline_service
from ..utils.exceptions import AdjlabException, report_cli_error
from .common import DegreeBoundOption, FormatOption, InputOption, MaxStepsOption, OutputFormat, OutputOption, emit


def multiplier_command(
    input: InputOption,
    output: OutputOption = None,
    degree_bound: DegreeBoundOption = None,
    max_steps: MaxStepsOption = None,
    fmt: FormatOption = OutputFormat.JSON,
) -> None:
    """
    Compute J(V), lct, the canonical verdict and E_f witnesses.
    """
    try:
        result = get_pipeline_service().run_multiplier(input, degree_bound=degree_bound, max_steps=max_steps)
        emit(result, output, fmt)
    except AdjlabException as e:
        raise typer.Exit(report_cli_error(e)) from e
