"""
Problem-file models for adjlab.
"""

from pydantic import BaseModel, ConfigDict, Field


class BlowupStep(BaseModel):
    """One point blow-up of a script."""

    chart: str = Field("0", description="Id of the chart containing the center")
    point: list[str | int] = Field(..., description="Center coordinates as rationals, e.g. 0 or \"1/2\"")


class BranchSpec(BaseModel):
    """Parameterized branch of a plane curve."""

    param: list[str] = Field(..., description="Component polynomials in the parameter")
    radius: float = Field(1.0, description="Radius of the parameter disc")
    mu: int | None = Field(None, description="Omitted index of the residue form on this branch (1-based)")
    parameter: str = Field("t", description="Name of the branch parameter")


class GraphSpec(BaseModel):
    """V as a graph over a region of the other coordinates."""

    model_config = ConfigDict(populate_by_name=True)

    dependent: str = Field(..., description="Variable solved for")
    g_num: str = Field(..., alias="G_num", description="Numerator of the graph function")
    g_den: str = Field("1", alias="G_den", description="Denominator of the graph function")
    region: list[str] = Field(..., description="Constraints such as \"|z|<=|x|\" or \"|x|<=1\"")
    radial: str | None = Field(None, description="Variable carrying the dyadic shells")
    mu: int | None = Field(None, description="Omitted index of the residue form (1-based; default: dependent)")


class ProblemSpec(BaseModel):
    """A hypersurface problem: equation, resolution hints, test forms and numeric charts."""

    name: str = Field("problem", description="Problem name")
    variables: list[str] = Field(..., description="Ordered base variables")
    f: str = Field(..., description="Defining polynomial")
    blowup_script: list[BlowupStep] | None = Field(None, description="Blow-up sequence (automatic for plane curves)")
    snc_assertion: bool = Field(False, description="Caller vouches for normal crossings after the script")
    normal: bool = Field(False, description="Caller asserts V is normal")
    mu: int | None = Field(None, description="Omitted index of reported residue forms (1-based)")
    g_list: list[str] = Field(default_factory=lambda: ["1"], description="Numerators g of the test forms g dz / f")
    witness_ideal: list[str] | None = Field(None, description="Declared E_f witness monomials to validate")
    branches: list[BranchSpec] = Field(default_factory=list, description="Curve branches for quadrature")
    graphs: list[GraphSpec] = Field(default_factory=list, description="Graph charts for Monte Carlo")

    # Numeric parameters
    shells: str | None = Field(None, description="Shell range \"k_min:k_max\"")
    samples: int | None = Field(None, description="Monte Carlo samples per shell")
    seed: int | None = Field(None, description="Seed for sampling")
    degree_bound: int | None = Field(None, description="Monomial enumeration bound")
    max_steps: int | None = Field(None, description="Blow-up budget of the automatic resolver")


class HowaldRequest(BaseModel):
    """Newton-polyhedron multiplier ideal of a monomial ideal."""

    ideal: list[str] = Field(..., description="Monomial generators")
    variables: list[str] = Field(..., description="Ordered variables")
    c: str = Field("1", description="Positive rational coefficient")
    degree_bound: int | None = Field(None, description="Monomial enumeration bound")
