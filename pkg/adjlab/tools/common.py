"""
Shared options and report output for adjlab commands.
"""

from enum import Enum
from pathlib import Path
from typing import Annotated

import typer
from loguru import logger
from pydantic import BaseModel

from ..utils.exceptions import ConfigurationError
from ..utils.rendering import render_text


class OutputFormat(str, Enum):
    JSON = "json"
    TEXT = "text"


InputOption = Annotated[str, typer.Option("-i", "--input", help="Problem file path or shipped problem name")]
OutputOption = Annotated[Path | None, typer.Option("-o", "--output", help="Write the report to this file")]
SeedOption = Annotated[int | None, typer.Option("--seed", help="Sampling seed (default: ADJLAB_SEED or 42)")]
ShellsOption = Annotated[str | None, typer.Option("--shells", help="Dyadic shell range k_min:k_max")]
SamplesOption = Annotated[int | None, typer.Option("--samples", help="Monte Carlo samples per shell")]
DegreeBoundOption = Annotated[int | None, typer.Option("--degree-bound", help="Monomial enumeration bound")]
MaxStepsOption = Annotated[int | None, typer.Option("--max-steps", help="Blow-up budget of the plane-curve resolver")]
FormatOption = Annotated[OutputFormat, typer.Option("--format", help="Report format")]


def emit(result: BaseModel, output: Path | None, fmt: OutputFormat) -> None:
    """Write a report as indented JSON or text, to a file or stdout."""
    if fmt is OutputFormat.TEXT:
        text = render_text(result)
    else:
        text = result.model_dump_json(indent=2) + "\n"
    if output is None:
        typer.echo(text, nl=False)
        return
    try:
        output.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot write report to {output}: {e}") from e
    logger.info("Wrote report", path=str(output), format=fmt.value)
