"""
Exact algebra and numerics: polynomials, blow-ups, resolution trees,
multiplier ideals, residues and dyadic shell integration.
"""

from .adjunction import MeromorphicTopForm, ResidueForm, adjunction_map
from .blowup import BlowupCenter, Chart
from .multiplier import MonomialIdeal, multiplier_generators
from .poly import Polynomial, format_poly, parse_poly
from .resolution import ResolutionTree, SncStatus, resolve_plane_curve, resolve_scripted

__all__ = [
    "BlowupCenter",
    "Chart",
    "MeromorphicTopForm",
    "MonomialIdeal",
    "Polynomial",
    "ResidueForm",
    "ResolutionTree",
    "SncStatus",
    "adjunction_map",
    "format_poly",
    "multiplier_generators",
    "parse_poly",
    "resolve_plane_curve",
    "resolve_scripted",
]
