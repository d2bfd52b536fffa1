"""
Report models for adjlab.
"""

from typing import Literal

from pydantic import BaseModel, Field


class ReportHeader(BaseModel):
    """Provenance shared by all reports."""

    tool_version: str = Field(..., description="adjlab version")
    backend: str = Field(..., description="Exact-arithmetic backend")
    input_hash: str = Field(..., description="SHA-256 of the canonical problem JSON")
    problem: str = Field(..., description="Problem name")


# Resolution
class DivisorModel(BaseModel):
    """Exceptional divisor data."""

    id: str = Field(..., description="Divisor id")
    m: int = Field(..., description="Multiplicity in E_f")
    k: int = Field(..., description="Discrepancy")
    birth_step: int = Field(..., description="Blow-up that created the divisor")


class ChartModel(BaseModel):
    """Chart of the resolution."""

    id: str = Field(..., description="Chart id")
    variables: list[str] = Field(..., description="Chart variables")
    map_to_base: list[str] = Field(..., description="Base coordinates in chart variables")
    exceptional: dict[str, str] = Field(default_factory=dict, description="Chart variable -> divisor id")


class ResolutionModel(BaseModel):
    """Serialized resolution tree."""

    variables: list[str] = Field(..., description="Base variables")
    f: str = Field(..., description="Defining polynomial")
    divisors: list[DivisorModel] = Field(default_factory=list, description="Exceptional divisors")
    charts: list[ChartModel] = Field(default_factory=list, description="Charts")
    snc_status: Literal["verified", "asserted", "unverified"] = Field(..., description="Normal-crossing status")


class ResolutionChecks(BaseModel):
    """Cross-checks of a resolution."""

    jacobian_discrepancies: list[int] = Field(..., description="k recomputed from chart Jacobians")
    discrepancies_agree: bool = Field(..., description="Jacobian k equals accumulated k")
    snc_witness: str | None = Field(None, description="Witness when normal crossings are unverified")


class ResolveResult(ReportHeader):
    """Output of the resolve stage."""

    resolution: ResolutionModel = Field(..., description="Resolution tree")
    checks: ResolutionChecks = Field(..., description="Cross-checks")


# Multiplier
class MultiplierModel(BaseModel):
    """Multiplier ideal J(V)."""

    thresholds: list[int] = Field(..., description="max(0, m_i - k_i) per divisor")
    generators: list[str] | Literal["unit", "non_monomial_unsupported"] = Field(..., description="Generators of J(V)")
    lct: str = Field(..., description="Log canonical threshold")
    canonical: Literal["canonical", "not_canonical", "not_applicable"] = Field(..., description="Canonical verdict")
    reduced: bool = Field(True, description="False when f has repeated factors")


class WitnessModel(BaseModel):
    """E_f witness generators and the oracle cross-check."""

    generators: list[str] | None = Field(None, description="Witness monomials found")
    valid: bool | None = Field(None, description="Found set passes the validity predicate")
    declared: list[str] | None = Field(None, description="Witness set declared by the problem")
    declared_valid: bool | None = Field(None, description="Declared set passes the validity predicate")
    oracle_generators: list[str] | Literal["unit"] | None = Field(
        None, description="Newton-polyhedron multiplier ideal of the witness ideal at c=1"
    )
    oracle_agrees: bool | None = Field(None, description="Oracle equals the divisorial generators")
    note: str | None = Field(None, description="Reason a field is missing")


class MultiplierResult(ReportHeader):
    """Output of the multiplier stage."""

    multiplier: MultiplierModel = Field(..., description="Multiplier ideal")
    witnesses: WitnessModel = Field(..., description="E_f witnesses")
    membership: dict[str, bool] = Field(default_factory=dict, description="g -> g in J(V)")


class HowaldResult(BaseModel):
    """Output of the howald stage."""

    variables: list[str] = Field(..., description="Variables")
    ideal: list[str] = Field(..., description="Input monomial ideal")
    c: str = Field(..., description="Coefficient")
    generators: list[str] | Literal["unit"] = Field(..., description="Multiplier ideal generators")


# Adjunction
class ResidueModel(BaseModel):
    """Residue form of g dz / f."""

    g: str = Field(..., description="Numerator of the top form")
    sign: int = Field(..., description="Sign (-1)^(mu-1)")
    mu: int = Field(..., description="Omitted index (1-based)")
    numerator: str = Field(..., description="Residue numerator")
    denominator: str = Field(..., description="Residue denominator df/dz_mu")
    identity_check: bool = Field(..., description="df ^ residue reproduces the top form")
    l2_exact: bool | None = Field(None, description="g in J(V)")


class MuConsistencyModel(BaseModel):
    """Numerical independence of the residue from the omitted index."""

    g: str = Field(..., description="Numerator of the top form")
    pairs: list[list[int]] = Field(..., description="Index pairs compared")
    samples: int = Field(..., description="Regular points per pair")
    max_deviation: float = Field(..., description="Largest relative deviation")
    passed: bool = Field(..., description="Deviation below tolerance")


class AdjunctResult(ReportHeader):
    """Output of the adjunct stage."""

    residues: list[ResidueModel] = Field(default_factory=list, description="Residue forms")
    mu_consistency: list[MuConsistencyModel] = Field(default_factory=list, description="Index consistency checks")


# L2 checks
class DyadicModel(BaseModel):
    """Shell masses of one residue on one branch or chart."""

    g: str = Field(..., description="Numerator of the top form")
    chart: str = Field(..., description="Branch or graph chart label")
    mu: int = Field(..., description="Omitted index used")
    method: str = Field(..., description="quadrature or monte_carlo")
    shells: list[int] = Field(..., description="Shell indices")
    masses: list[float] = Field(..., description="Shell masses")
    std_errors: list[float] = Field(..., description="Standard errors of the masses")
    ratio: float = Field(..., description="Fitted mass ratio")
    ratio_band: list[float] = Field(..., description="3-sigma band of the ratio")
    verdict: Literal["convergent", "divergent", "inconclusive"] = Field(..., description="Integrability verdict")
    samples: int = Field(..., description="Samples or nodes per shell")
    discarded: int = Field(0, description="Samples discarded at poles")
    seed: int | None = Field(None, description="Seed")
    notes: list[str] = Field(default_factory=list, description="Diagnostics")


class AgreementModel(BaseModel):
    """Exact against numerical integrability for one g."""

    g: str = Field(..., description="Numerator of the top form")
    exact: bool = Field(..., description="g in J(V)")
    numeric: Literal["convergent", "divergent", "inconclusive"] = Field(..., description="Conjunction of verdicts")
    status: Literal["agree", "disagree", "numeric_inconclusive"] = Field(..., description="Agreement status")


class L2Result(ReportHeader):
    """Output of the l2 stage."""

    dyadic: list[DyadicModel] = Field(default_factory=list, description="Dyadic reports")
    agreement: list[AgreementModel] = Field(default_factory=list, description="Agreement matrix")


class Report(ReportHeader):
    """Full pipeline report."""

    resolution: ResolutionModel = Field(..., description="Resolution tree")
    checks: ResolutionChecks = Field(..., description="Resolution cross-checks")
    witnesses: WitnessModel = Field(..., description="E_f witnesses")
    multiplier: MultiplierModel = Field(..., description="Multiplier ideal")
    membership: dict[str, bool] = Field(default_factory=dict, description="g -> g in J(V)")
    residues: list[ResidueModel] = Field(default_factory=list, description="Residue forms")
    mu_consistency: list[MuConsistencyModel] = Field(default_factory=list, description="Index consistency checks")
    dyadic: list[DyadicModel] = Field(default_factory=list, description="Dyadic reports")
    agreement: list[AgreementModel] = Field(default_factory=list, description="Agreement matrix")
