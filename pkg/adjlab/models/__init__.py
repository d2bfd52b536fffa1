"""
Pydantic models for problem files and reports.
"""

from .requests import BlowupStep, BranchSpec, GraphSpec, HowaldRequest, ProblemSpec
from .responses import (
    AdjunctResult,
    AgreementModel,
    ChartModel,
    DivisorModel,
    DyadicModel,
    HowaldResult,
    L2Result,
    MultiplierModel,
    MultiplierResult,
    MuConsistencyModel,
    Report,
    ReportHeader,
    ResidueModel,
    ResolutionChecks,
    ResolutionModel,
    ResolveResult,
    WitnessModel,
)

__all__ = [
    # Request models
    "BlowupStep",
    "BranchSpec",
    "GraphSpec",
    "HowaldRequest",
    "ProblemSpec",
    # Response models
    "AdjunctResult",
    "AgreementModel",
    "ChartModel",
    "DivisorModel",
    "DyadicModel",
    "HowaldResult",
    "L2Result",
    "MultiplierModel",
    "MultiplierResult",
    "MuConsistencyModel",
    "Report",
    "ReportHeader",
    "ResidueModel",
    "ResolutionChecks",
    "ResolutionModel",
    "ResolveResult",
    "WitnessModel",
]
