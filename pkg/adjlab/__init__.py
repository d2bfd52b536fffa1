"""
adjlab

Exact multiplier ideals, residue adjunction and dyadic L2 checks for
hypersurface singularities, driven from JSON problem files.
"""

__version__ = "0.1.0"
__author__ = "adjlab developers"

from loguru import logger

logger.disable("adjlab")

from .main import app  # noqa: E402

__all__ = ["app"]
