"""
Newton-polyhedron multiplier ideal command.
"""

import re
from typing import Annotated

import typer
from loguru import logger

from ..models.requests import HowaldRequest
from ..services.pipeline_service import get_pipeline_service
from ..utils.exceptions import AdjlabException, report_cli_error
from .common import DegreeBoundOption, FormatOption, OutputFormat, OutputOption, emit

_IDENTIFIER = re.compile(r"[A-Za-z_]\w*")


def infer_variables(ideal: str) -> list[str]:
    """Variable names in order of first appearance."""
    return list(dict.fromkeys(_IDENTIFIER.findall(ideal)))


def howald_command(
    ideal: Annotated[str, typer.Option("--ideal", help="Monomial generators, e.g. \"z1^3,z2^2\"")],
    c: Annotated[str, typer.Option("--c", help="Positive rational coefficient")] = "1",
    variables: Annotated[
        str | None, typer.Option("--variables", help="Comma-separated variables (default: as they appear)")
    ] = None,
    output: OutputOption = None,
    degree_bound: DegreeBoundOption = None,
    fmt: FormatOption = OutputFormat.JSON,
) -> None:
    """
    Multiplier ideal of c times a monomial ideal from its Newton polyhedron.
    """
    names = [v.strip() for v in variables.split(",")] if variables else infer_variables(ideal)
    request = HowaldRequest(ideal=ideal.split(","), variables=names, c=c, degree_bound=degree_bound)
    logger.debug("Howald request", ideal=request.ideal, variables=names, c=c)
    try:
        result = get_pipeline_service().howald(request)
        emit(result, output, fmt)
    except AdjlabException as e:
        raise typer.Exit(report_cli_error(e)) from e
