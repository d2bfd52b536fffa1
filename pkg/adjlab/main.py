"""
Main typer application for adjlab.
"""

from typing import Annotated

import typer
from loguru import logger

from . import __version__
from .config import get_settings
from .services.pipeline_service import backend_identifier
from .tools.adjunct import adjunct_command
from .tools.howald import howald_command
from .tools.l2 import l2_command
from .tools.multiplier import multiplier_command
from .tools.report import report_command
from .tools.resolve import resolve_command
from .utils.logging import setup_logging


def _version_callback(value: bool) -> None:
    if value:
        typer.echo(f"adjlab {__version__} ({backend_identifier()})")
        raise typer.Exit()


def create_app() -> typer.Typer:
    """Create and configure the typer application."""
    app = typer.Typer(
        name="adjlab",
        help="Multiplier ideals, residue adjunction and dyadic L2 checks for hypersurface singularities.",
        no_args_is_help=True,
        add_completion=False,
    )

    @app.callback()
    def main(
        version: Annotated[
            bool, typer.Option("--version", callback=_version_callback, is_eager=True, help="Show version and exit")
        ] = False,
        log_level: Annotated[str | None, typer.Option("--log-level", help="Override ADJLAB_LOG_LEVEL")] = None,
    ) -> None:
        """Application setup."""
        settings = get_settings()
        setup_logging(log_level or settings.log_level, settings.log_file)
        logger.debug("Starting adjlab", version=__version__)

    # Register commands
    app.command("resolve")(resolve_command)
    app.command("multiplier")(multiplier_command)
    app.command("howald")(howald_command)
    app.command("adjunct")(adjunct_command)
    app.command("l2")(l2_command)
    app.command("report")(report_command)

    return app


# Application instance
app = create_app()
