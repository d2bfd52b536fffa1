"""
Utility functions and classes.
"""

from .exceptions import AdjlabException, report_cli_error
from .logging import setup_logging

__all__ = ["AdjlabException", "report_cli_error", "setup_logging"]
