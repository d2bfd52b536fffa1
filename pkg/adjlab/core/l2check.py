"""
Numerical square-integrability of residue forms on dyadic shells.

Curve branches use tensor-product polar quadrature on each annulus of the
parameter disc; graph charts use seeded Monte Carlo per shell.
"""

import math
import re
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from loguru import logger

from ..utils.exceptions import (
    ArityMismatchError,
    EmptyRegionError,
    InvalidBranchError,
    InvalidGraphError,
    NotQuasiHomogeneousError,
    TooFewShellsError,
)
from .adjunction import ResidueForm
from .poly import (
    Polynomial,
    evaluate_many,
    format_poly,
    parse_poly,
    partial_derivative,
    substitute,
    substitute_with_denominator,
)

_BOUND = re.compile(r"^\s*\|\s*([A-Za-z_]\w*)\s*\|\s*<=\s*(?:\|\s*([A-Za-z_]\w*)\s*\||([0-9.eE+-]+))\s*$")


class Verdict(str, Enum):
    CONVERGENT = "convergent"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class BranchParam:
    """A parameterized branch ``t -> (p_1(t), ..., p_n(t))`` on the disc ``|t| <= radius``."""

    components: tuple[Polynomial, ...]
    radius: float = 1.0

    @property
    def parameter(self) -> str:
        return self.components[0].variables[0]


@dataclass(frozen=True)
class RegionBound:
    """``|z_var| <= |z_other|`` when ``other`` is set, else ``|z_var| <= radius``."""

    var: int
    other: int | None = None
    radius: float | None = None


@dataclass(frozen=True)
class GraphChart:
    """V as the graph ``z_dependent = numerator / denominator`` over a region of the other coordinates."""

    dependent: int
    numerator: Polynomial
    denominator: Polynomial
    region: tuple[RegionBound, ...]
    radial: int | None = None

    @property
    def independent(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.numerator.nvars) if i != self.dependent)


@dataclass(frozen=True)
class DyadicReport:
    """Per-shell masses with their ratio fit and verdict."""

    shells: tuple[int, ...]
    masses: tuple[float, ...]
    std_errors: tuple[float, ...]
    ratio: float
    ratio_band: tuple[float, float]
    verdict: Verdict
    method: str
    samples: int
    discarded: int = 0
    seed: int | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)


# Shell arithmetic


MIN_SHELLS = 4


def _last_half(masses: Sequence[float]) -> list[float]:
    return list(masses[len(masses) // 2 :])


def _shell_range(k_min: int, k_max: int) -> tuple[int, ...]:
    shells = tuple(range(k_min, k_max + 1))
    if len(shells) < MIN_SHELLS:
        raise TooFewShellsError(len(shells))
    return shells


def fit_ratio(masses: Sequence[float], std_errors: Sequence[float] | None = None) -> tuple[float, tuple[float, float]]:
    """
    Geometric-mean ratio over the last half of the shells with a 3-sigma band.

    The mean of the log-ratios telescopes to ``(log M_last - log M_first) / q``,
    so its variance only involves the end shells.
    """
    if len(masses) < MIN_SHELLS:
        raise TooFewShellsError(len(masses))
    tail = _last_half(masses)
    q = len(tail) - 1
    first, last = tail[0], tail[-1]
    if first <= 0 and last <= 0:
        return 0.0, (0.0, 0.0)
    if first <= 0:
        return math.inf, (math.inf, math.inf)
    if last <= 0:
        return 0.0, (0.0, 0.0)
    log_ratio = (math.log(last) - math.log(first)) / q
    ratio = math.exp(log_ratio)
    if std_errors is None:
        return ratio, (ratio, ratio)
    errors = _last_half(std_errors)
    sigma = math.sqrt((errors[0] / first) ** 2 + (errors[-1] / last) ** 2) / q
    return ratio, (math.exp(log_ratio - 3 * sigma), math.exp(log_ratio + 3 * sigma))


def verdict(masses: Sequence[float], delta: float = 0.1) -> Verdict:
    """
    Geometric ratio test on dyadic shell masses.

    Convergent when the fitted ratio is below ``1 - delta``, divergent above
    ``1 + delta`` or when the last half of the masses never decreases.
    """
    if len(masses) < MIN_SHELLS:
        raise TooFewShellsError(len(masses))
    tail = _last_half(masses)
    if tail[-1] > 0 and all(b >= a for a, b in zip(tail, tail[1:])):
        return Verdict.DIVERGENT
    ratio, _ = fit_ratio(masses)
    if ratio < 1 - delta:
        return Verdict.CONVERGENT
    if ratio > 1 + delta:
        return Verdict.DIVERGENT
    return Verdict.INCONCLUSIVE


def _shell_bounds(k: int, radius: float = 1.0) -> tuple[float, float]:
    return radius * 2.0 ** (-k - 1), radius * 2.0 ** (-k)


# Curve branches


def validate_branch(f: Polynomial, branch: BranchParam) -> None:
    """Check that the branch lies on V exactly."""
    if len(branch.components) != f.nvars:
        raise InvalidBranchError(f"Branch has {len(branch.components)} components, expected {f.nvars}")
    if all(c.is_constant() for c in branch.components):
        raise InvalidBranchError("Branch is constant")
    if branch.radius <= 0:
        raise InvalidBranchError(f"Branch radius must be positive, got {branch.radius}")
    composite = substitute(f, branch.components)
    if not composite.is_zero():
        raise InvalidBranchError(f"Branch does not lie on V: f(param) = {format_poly(composite)}")


def branch_coefficient(residue: ResidueForm, branch: BranchParam) -> tuple[Polynomial, Polynomial]:
    """
    Pullback coefficient ``c(t)`` of a residue 1-form along a branch, as numerator and denominator.
    """
    if len(residue.variables) != 2:
        raise ArityMismatchError(2, len(residue.variables))
    surviving = residue.omitted[0]
    numerator = substitute(residue.numerator, branch.components) * partial_derivative(
        branch.components[surviving], 0
    )
    denominator = substitute(residue.denominator, branch.components)
    if denominator.is_zero():
        raise InvalidBranchError(f"df/dz_{residue.mu} vanishes identically on the branch")
    return numerator * residue.sign, denominator


def annulus_quadrature(inner: float, outer: float, radial_nodes: int, angular_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and area weights of Gauss-Legendre (radial) times trapezoid (angular) quadrature."""
    x, w = np.polynomial.legendre.leggauss(radial_nodes)
    r = 0.5 * (outer - inner) * x + 0.5 * (outer + inner)
    wr = 0.5 * (outer - inner) * w * r
    theta = 2 * np.pi * np.arange(angular_nodes) / angular_nodes
    nodes = (r[:, None] * np.exp(1j * theta[None, :])).ravel()
    weights = (wr[:, None] * np.full(angular_nodes, 2 * np.pi / angular_nodes)[None, :]).ravel()
    return nodes, weights


def curve_branch_mass(
    residue: ResidueForm,
    branch: BranchParam,
    k_min: int = 2,
    k_max: int = 12,
    radial_nodes: int = 24,
    angular_nodes: int = 64,
    delta: float = 0.1,
) -> DyadicReport:
    """
    Shell masses of ``|c(t)|^2`` on the dyadic annuli of the branch parameter disc.

    Args:
        residue: Residue form of a plane curve
        branch: Branch parameterization (validated separately against f)
        k_min: First shell index
        k_max: Last shell index
        radial_nodes: Gauss-Legendre nodes per annulus
        angular_nodes: Angular nodes per annulus
        delta: Half-width of the inconclusive ratio band

    Returns:
        Dyadic report of the quadrature masses
    """
    shells = _shell_range(k_min, k_max)
    numerator, denominator = branch_coefficient(residue, branch)
    masses = []
    for k in shells:
        inner, outer = _shell_bounds(k, branch.radius)
        nodes, weights = annulus_quadrature(inner, outer, radial_nodes, angular_nodes)
        t = nodes[:, None]
        values = evaluate_many(numerator, t) / evaluate_many(denominator, t)
        masses.append(float(np.sum(weights * np.abs(values) ** 2)))
    ratio, band = fit_ratio(masses, [0.0] * len(masses))
    return DyadicReport(
        shells=shells,
        masses=tuple(masses),
        std_errors=(0.0,) * len(masses),
        ratio=ratio,
        ratio_band=band,
        verdict=verdict(masses, delta),
        method="quadrature",
        samples=radial_nodes * angular_nodes,
    )


# Graph charts


def parse_region(constraints: Sequence[str], variables: Sequence[str]) -> tuple[RegionBound, ...]:
    """Parse ``"|z|<=|x|"`` and ``"|x|<=1"`` constraints."""
    index = {name: i for i, name in enumerate(variables)}
    bounds = []
    for text in constraints:
        match = _BOUND.match(text)
        if not match:
            raise EmptyRegionError(f"Cannot parse region constraint '{text}'")
        var, other, radius = match.groups()
        for name in (var, other):
            if name is not None and name not in index:
                raise EmptyRegionError(f"Unknown variable '{name}' in region constraint '{text}'")
        if other is not None:
            bounds.append(RegionBound(index[var], other=index[other]))
        else:
            value = float(radius)
            if value <= 0:
                raise EmptyRegionError(f"Region constraint '{text}' leaves an empty set")
            bounds.append(RegionBound(index[var], radius=value))
    return tuple(bounds)


def validate_graph(f: Polynomial, chart: GraphChart) -> None:
    """Check that the graph of G lies on V after clearing denominators."""
    n = f.nvars
    j = chart.dependent
    if not 0 <= j < n:
        raise InvalidGraphError(f"Dependent index {j} out of range")
    if chart.denominator.is_zero():
        raise InvalidGraphError("Graph denominator is zero")
    for part in (chart.numerator, chart.denominator):
        if part.variables != f.variables:
            raise InvalidGraphError("Graph function uses a different variable list")
        if part.degree_in(j) > 0:
            raise InvalidGraphError(f"Graph function depends on its own variable {f.variables[j]}")
    images = [chart.numerator if i == j else Polynomial.variable(f.variables, i) for i in range(n)]
    exponents = [1 if i == j else 0 for i in range(n)]
    cleared, _ = substitute_with_denominator(f, images, chart.denominator, exponents)
    if not cleared.is_zero():
        raise InvalidGraphError(f"Graph does not lie on V: cleared numerator {format_poly(cleared)}")


def default_radial(chart: GraphChart) -> int:
    """The independent variable that bounds others and is bounded by none."""
    dominated = {b.var for b in chart.region if b.other is not None}
    dominating = [b.other for b in chart.region if b.other is not None and b.other not in dominated]
    if dominating:
        return min(dominating)
    free = [i for i in chart.independent if i not in dominated]
    if not free:
        raise EmptyRegionError("Region has no radial variable")
    return free[0]


def _sampling_plan(chart: GraphChart, radial: int) -> list[tuple[int, list[RegionBound]]]:
    """Order in which non-radial variables are drawn, each with the bounds that size its disc."""
    placed = {radial}
    remaining = [i for i in chart.independent if i != radial]
    plan = []
    while remaining:
        progress = False
        for var in list(remaining):
            usable = [
                b for b in chart.region if b.var == var and (b.other is None or b.other in placed)
            ]
            if usable:
                plan.append((var, usable))
                placed.add(var)
                remaining.remove(var)
                progress = True
        if not progress:
            raise EmptyRegionError(
                "Region leaves variables unbounded: " + ", ".join(str(i) for i in remaining)
            )
    return plan


@dataclass(frozen=True)
class _GraphIntegrand:
    residue: ResidueForm
    chart: GraphChart
    radial: int
    plan: list
    radial_limit: float
    samples: int
    seed: int

    def shell(self, k: int) -> tuple[float, float, int]:
        """Mass, standard error and discarded count of one shell."""
        rng = np.random.default_rng([self.seed, k])
        inner, outer = _shell_bounds(k)
        outer = min(outer, self.radial_limit)
        if outer <= inner:
            raise EmptyRegionError(f"Shell {k} lies outside the region")
        n = len(self.residue.variables)
        count = self.samples
        z = np.zeros((count, n), dtype=np.complex128)
        volume = np.full(count, np.pi * (outer**2 - inner**2))

        r = np.sqrt(rng.uniform(inner**2, outer**2, count))
        z[:, self.radial] = r * np.exp(2j * np.pi * rng.uniform(0, 1, count))
        for var, bounds in self.plan:
            radius = np.full(count, np.inf)
            for bound in bounds:
                limit = np.abs(z[:, bound.other]) if bound.other is not None else np.full(count, bound.radius)
                radius = np.minimum(radius, limit)
            rho = radius * np.sqrt(rng.uniform(0, 1, count))
            z[:, var] = rho * np.exp(2j * np.pi * rng.uniform(0, 1, count))
            volume = volume * np.pi * radius**2

        inside = np.ones(count, dtype=bool)
        for bound in self.chart.region:
            limit = np.abs(z[:, bound.other]) if bound.other is not None else bound.radius
            inside &= np.abs(z[:, bound.var]) <= limit

        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            den = evaluate_many(self.chart.denominator, z)
            g_value = evaluate_many(self.chart.numerator, z) / den
            z[:, self.chart.dependent] = g_value
            gradients = {}
            for i in self.chart.independent:
                # d(N/D) = (N' D - N D') / D^2
                n_i = evaluate_many(partial_derivative(self.chart.numerator, i), z)
                d_i = evaluate_many(partial_derivative(self.chart.denominator, i), z)
                gradients[i] = (n_i - g_value * d_i) / den
            kept_rows = [i for i in range(n) if i != self.residue.mu - 1]
            columns = list(self.chart.independent)
            jac = np.zeros((count, len(kept_rows), len(columns)), dtype=np.complex128)
            for a, i in enumerate(kept_rows):
                for b, v in enumerate(columns):
                    if i == self.chart.dependent:
                        jac[:, a, b] = gradients[v]
                    elif i == v:
                        jac[:, a, b] = 1.0
            minors = np.linalg.det(jac) if kept_rows else np.ones(count)
            coefficient = (
                self.residue.sign
                * evaluate_many(self.residue.numerator, z)
                / evaluate_many(self.residue.denominator, z)
                * minors
            )
            gram = 1.0 + sum(np.abs(g) ** 2 for g in gradients.values())
            weight = np.where(inside, np.abs(coefficient) ** 2 * gram * volume, 0.0)

        bad = ~np.isfinite(weight)
        discarded = int(np.count_nonzero(bad))
        if discarded:
            logger.debug("Discarded samples at denominator zeros", shell=k, discarded=discarded)
        good = weight[~bad]
        if good.size == 0:
            return 0.0, 0.0, discarded
        mean = float(np.sum(good)) / count
        spread = float(np.std(np.where(bad, 0.0, weight))) / math.sqrt(count)
        return mean, spread, discarded


def graph_chart_mass(
    residue: ResidueForm,
    chart: GraphChart,
    k_min: int = 2,
    k_max: int = 12,
    samples_per_shell: int = 20000,
    seed: int = 42,
    workers: int = 4,
    delta: float = 0.1,
    discard_limit: float = 0.01,
) -> DyadicReport:
    """
    Monte Carlo shell masses of a residue form over a graph chart of V.

    Each shell draws the radial variable uniformly from its annulus and the
    other independent variables uniformly from discs sized by the region, and
    averages ``|c|^2 * det(I + J^* J) * volume``. Every shell has its own
    generator seeded by ``(seed, k)``, so the result does not depend on workers.

    Returns:
        Dyadic report; inconclusive when more than ``discard_limit`` of the samples hit a pole
    """
    shells = _shell_range(k_min, k_max)
    radial = chart.radial if chart.radial is not None else default_radial(chart)
    if radial not in chart.independent:
        raise EmptyRegionError(f"Radial variable {radial} is the dependent variable")
    radial_limit = min((b.radius for b in chart.region if b.var == radial and b.radius is not None), default=math.inf)
    integrand = _GraphIntegrand(
        residue=residue,
        chart=chart,
        radial=radial,
        plan=_sampling_plan(chart, radial),
        radial_limit=radial_limit,
        samples=samples_per_shell,
        seed=seed,
    )
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(integrand.shell, shells))

    masses = [mass for mass, _, _ in results]
    errors = [error for _, error, _ in results]
    discarded = sum(d for _, _, d in results)
    ratio, band = fit_ratio(masses, errors)
    outcome = verdict(masses, delta)
    notes: tuple[str, ...] = ()
    if discarded > discard_limit * samples_per_shell * len(shells):
        outcome = Verdict.INCONCLUSIVE
        notes = (f"{discarded} samples discarded at poles",)
    return DyadicReport(
        shells=shells,
        masses=tuple(masses),
        std_errors=tuple(errors),
        ratio=ratio,
        ratio_band=band,
        verdict=outcome,
        method="monte_carlo",
        samples=samples_per_shell,
        discarded=discarded,
        seed=seed,
        notes=notes,
    )


# Weighted scans of |f|^(-2c)


def weighted_degree(f: Polynomial, weights: Sequence[int]) -> int:
    """Common weighted degree of all terms; raises when f is not quasi-homogeneous."""
    degrees = {sum(w * e for w, e in zip(weights, monom)) for monom in f.terms}
    if len(degrees) != 1:
        raise NotQuasiHomogeneousError(tuple(weights))
    return degrees.pop()


def weighted_integrability_scan(
    f: Polynomial,
    c: float,
    weights: Sequence[int],
    k_min: int = 2,
    k_max: int = 8,
    grid: int = 32,
    delta: float = 0.1,
) -> DyadicReport:
    """
    Integrability of ``|f|^(-2c)`` near the origin on quasi-homogeneous shells.

    Shell k is ``2^(-k-1) <= max_i |z_i|^(1/w_i) <= 2^(-k)``; each shell is
    integrated on a midpoint polar grid with ``grid`` nodes per real
    coordinate, obtained by scaling one reference grid.
    """
    weights = tuple(weights)
    if len(weights) != f.nvars:
        raise ArityMismatchError(f.nvars, len(weights))
    shells = _shell_range(k_min, k_max)
    weighted_degree(f, weights)
    n = f.nvars
    mid = (np.arange(grid) + 0.5) / grid
    axes = []
    for _ in range(n):
        axes.extend([mid, 2 * np.pi * mid])
    mesh = np.meshgrid(*axes, indexing="ij")
    unit_radii = [mesh[2 * i].ravel() for i in range(n)]
    angles = [mesh[2 * i + 1].ravel() for i in range(n)]

    masses = []
    for k in shells:
        scales = [2.0 ** (-k * w) for w in weights]
        radii = [u * s for u, s in zip(unit_radii, scales)]
        z = np.stack([r * np.exp(1j * a) for r, a in zip(radii, angles)], axis=1)
        rho = np.max(np.stack([r ** (1.0 / w) for r, w in zip(radii, weights)], axis=1), axis=1)
        inside = rho >= 2.0 ** (-k - 1)
        cell = np.prod([r * (s / grid) * (2 * np.pi / grid) for r, s in zip(radii, scales)], axis=0)
        with np.errstate(divide="ignore"):
            density = np.abs(evaluate_many(f, z)) ** (-2 * c)
        density = np.where(np.isfinite(density) & inside, density, 0.0)
        masses.append(float(np.sum(density * cell)))
    ratio, band = fit_ratio(masses, [0.0] * len(masses))
    return DyadicReport(
        shells=shells,
        masses=tuple(masses),
        std_errors=(0.0,) * len(masses),
        ratio=ratio,
        ratio_band=band,
        verdict=verdict(masses, delta),
        method="grid",
        samples=grid ** (2 * n),
    )


def parse_branch(param: Sequence[str], radius: float, parameter: str = "t") -> BranchParam:
    """Branch from component strings in one parameter."""
    components = tuple(parse_poly(text, (parameter,)) for text in param)
    return BranchParam(components=components, radius=radius)
