"""
Command-line tools for the adjlab pipeline.
"""

from .adjunct import adjunct_command
from .howald import howald_command
from .l2 import l2_command
from .multiplier import multiplier_command
from .report import report_command
from .resolve import resolve_command

__all__ = [
    "adjunct_command",
    "howald_command",
    "l2_command",
    "multiplier_command",
    "report_command",
    "resolve_command",
]
