"""
Embedded resolution by point blow-ups: exceptional multiplicities, discrepancies
and normal-crossing checks.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from loguru import logger

from ..utils.exceptions import (
    ArityMismatchError,
    CenterNotInChartError,
    IrrationalCenterError,
    MaxStepsExceededError,
    NonSquarefreeError,
    VariableMismatchError,
    ZeroPolynomialError,
)
from .blowup import BlowupCenter, Chart, blowup_point_charts, pull_back, root_chart, strict_transform_split
from .poly import (
    Polynomial,
    coordinate_order,
    factor_list,
    format_poly,
    jacobian_determinant,
    linear_root,
    partial_derivative,
    restrict,
    resultant,
)


class SncStatus(str, Enum):
    """How far a tree is known to have normal crossings."""

    VERIFIED = "verified"
    ASSERTED = "asserted"
    UNVERIFIED = "unverified"


@dataclass(frozen=True)
class ExceptionalDivisor:
    """An exceptional divisor with its multiplicity in E_f and its discrepancy."""

    id: str
    m: int
    k: int
    birth_step: int


@dataclass(frozen=True)
class ResolutionTree:
    """Charts and exceptional divisors of a sequence of point blow-ups of ``V = (f)``."""

    variables: tuple[str, ...]
    f: Polynomial
    charts: tuple[Chart, ...]
    divisors: tuple[ExceptionalDivisor, ...]
    snc_status: SncStatus
    snc_witness: str | None = None

    def chart(self, chart_id: str) -> Chart:
        for chart in self.charts:
            if chart.id == chart_id:
                return chart
        raise CenterNotInChartError(chart_id, "no such chart")

    def children(self, chart_id: str) -> list[Chart]:
        return [chart for chart in self.charts if chart.parent == chart_id]

    def leaves(self) -> list[Chart]:
        """Charts that were never blown up."""
        parents = {chart.parent for chart in self.charts}
        return [chart for chart in self.charts if chart.id not in parents]

    def centers(self) -> list[BlowupCenter]:
        """Blow-up centers in the order they were applied."""
        seen: list[BlowupCenter] = []
        for chart in self.charts:
            if chart.center is not None and chart.center not in seen:
                seen.append(chart.center)
        return seen

    def centers_in(self, chart_id: str) -> list[tuple[Fraction, ...]]:
        return [c.point for c in self.centers() if c.chart_id == chart_id]

    def is_monomial(self) -> bool:
        """True when every center was a chart origin."""
        return all(center.is_origin for center in self.centers())

    def divisor(self, divisor_id: str) -> ExceptionalDivisor:
        for divisor in self.divisors:
            if divisor.id == divisor_id:
                return divisor
        raise KeyError(divisor_id)

    def visible_chart(self, divisor_id: str) -> tuple[Chart, int]:
        """First chart where the divisor is a coordinate hyperplane, with that coordinate."""
        for chart in self.charts:
            index = chart.divisor_coordinate(divisor_id)
            if index is not None:
                return chart, index
        raise KeyError(divisor_id)

    def strict_transform(self, chart: Chart) -> Polynomial:
        strict, _ = strict_transform_split(pull_back(self.f, chart), chart)
        return strict

    @property
    def m(self) -> tuple[int, ...]:
        return tuple(d.m for d in self.divisors)

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(d.k for d in self.divisors)


@dataclass(frozen=True)
class NonSncPoint:
    """A rational point where the total transform fails to have normal crossings."""

    chart_id: str
    point: tuple[Fraction, ...]
    reason: str

    def sort_key(self) -> tuple:
        return (sum(abs(c) for c in self.point), self.point, tuple(int(p) for p in self.chart_id.split(".")))

    def as_center(self) -> BlowupCenter:
        return BlowupCenter(self.chart_id, self.point)


@dataclass(frozen=True)
class SncCheck:
    """Outcome of a normal-crossing check."""

    status: SncStatus
    witness: str | None = None
    chart_id: str | None = None
    reason: str | None = None


@dataclass
class _TreeBuilder:
    """Mutable accumulator used while blowing up; frozen into a ResolutionTree."""

    f: Polynomial
    charts: list[Chart] = field(default_factory=list)
    divisors: list[ExceptionalDivisor] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.f.is_zero():
            raise ZeroPolynomialError("Resolution")
        self.charts.append(root_chart(self.f.variables))

    def blow_up(self, center: BlowupCenter) -> ExceptionalDivisor:
        chart = next((c for c in self.charts if c.id == center.chart_id), None)
        if chart is None:
            raise CenterNotInChartError(center.chart_id, "no such chart")
        if len(center.point) != chart.dimension:
            raise CenterNotInChartError(chart.id, f"center has {len(center.point)} coordinates")
        siblings = [c for c in self.charts if c.parent == chart.id]
        if any(c.center is not None and c.center.point == center.point for c in siblings):
            raise CenterNotInChartError(chart.id, "point was already blown up")

        step = len(self.divisors) + 1
        divisor_id = f"E{step}"
        children = blowup_point_charts(chart, center, divisor_id, first_child=len(siblings) + 1)

        n = chart.dimension
        through = [
            self._divisor(did).k for j, did in chart.exceptional_locus.items() if center.point[j] == 0
        ]
        k = (n - 1) + sum(through)
        m = coordinate_order(pull_back(self.f, children[0]), 0)
        divisor = ExceptionalDivisor(id=divisor_id, m=m, k=k, birth_step=step)
        self.divisors.append(divisor)
        self.charts.extend(children)
        logger.debug("Created exceptional divisor", divisor=divisor_id, m=m, k=k, chart=chart.id)
        return divisor

    def _divisor(self, divisor_id: str) -> ExceptionalDivisor:
        return next(d for d in self.divisors if d.id == divisor_id)

    def freeze(self, status: SncStatus, witness: str | None = None) -> ResolutionTree:
        return ResolutionTree(
            variables=self.f.variables,
            f=self.f,
            charts=tuple(self.charts),
            divisors=tuple(self.divisors),
            snc_status=status,
            snc_witness=witness,
        )


# Non-SNC search for plane curves


def _rational_roots(chart_id: str, u: Polynomial, var_index: int) -> list[Fraction]:
    """Rational roots of a polynomial in one variable; irrational roots abort."""
    if u.is_zero() or u.is_constant():
        return []
    roots = []
    _, factors = factor_list(u)
    for factor, _ in factors:
        if factor.is_constant():
            continue
        root = linear_root(factor, var_index)
        if root is None:
            raise IrrationalCenterError(chart_id, format_poly(factor))
        roots.append(root)
    return sorted(roots)


def _check_squarefree(f: Polynomial) -> None:
    common = f
    for i in range(f.nvars):
        common = common.gcd(partial_derivative(f, i))
    if not common.is_zero() and not common.is_constant():
        raise NonSquarefreeError(format_poly(common))


def _singular_points(chart_id: str, s: Polynomial) -> list[tuple[Fraction, Fraction]]:
    """Rational common zeros of s and its two partials."""
    if s.is_constant():
        return []
    sx, sy = partial_derivative(s, 0), partial_derivative(s, 1)
    if s.degree_in(0) <= 0 or s.degree_in(1) <= 0:
        # Squarefree in one variable: smooth
        return []

    candidates: Polynomial | None = None
    found = 0
    for lam in range(s.degree() + 4):
        h = sy + sx * lam
        if h.is_zero() or not s.gcd(h).is_constant():
            continue
        if h.degree_in(1) <= 0:
            res = h ** s.degree_in(1)
        else:
            res = resultant(s, h, 1)
        candidates = res if candidates is None else candidates.gcd(res)
        found += 1
        if found == 2:
            break
    if candidates is None or candidates.is_constant():
        return []

    points = []
    for x0 in _rational_roots(chart_id, candidates, 0):
        fibre = [restrict(q, {0: x0}) for q in (s, sx, sy)]
        u = fibre[0].gcd(fibre[1]).gcd(fibre[2])
        if u.is_zero():
            raise NonSquarefreeError(f"{s.variables[0]} - {x0}")
        points.extend((x0, y0) for y0 in _rational_roots(chart_id, u, 1))
    return points


def _chart_non_snc_points(tree: ResolutionTree, chart: Chart) -> list[NonSncPoint]:
    strict = tree.strict_transform(chart)
    own_centers = set(tree.centers_in(chart.id))
    zero = Fraction(0)
    found: list[NonSncPoint] = []

    if chart.parent is None:
        for point in _singular_points(chart.id, strict):
            found.append(NonSncPoint(chart.id, point, "singular strict transform"))
    elif chart.birth_index == 0:
        # Owns the new divisor {w0 = 0}
        line = restrict(strict, {0: 0})
        double = line.gcd(partial_derivative(line, 1))
        for y0 in _rational_roots(chart.id, double, 1):
            singular = restrict(partial_derivative(strict, 0), {0: 0, 1: y0}).is_zero()
            reason = "singular strict transform" if singular else "strict transform tangent to exceptional divisor"
            found.append(NonSncPoint(chart.id, (zero, y0), reason))
        if 1 in chart.exceptional_locus and restrict(line, {1: 0}).is_zero():
            found.append(NonSncPoint(chart.id, (zero, zero), "three components through a point"))
    else:
        # Owns the origin only
        if restrict(strict, {0: 0, 1: 0}).is_zero():
            if 0 in chart.exceptional_locus:
                found.append(NonSncPoint(chart.id, (zero, zero), "three components through a point"))
            elif restrict(partial_derivative(strict, 0), {0: 0, 1: 0}).is_zero():
                found.append(NonSncPoint(chart.id, (zero, zero), "strict transform tangent to exceptional divisor"))

    unique: dict[tuple[Fraction, ...], NonSncPoint] = {}
    for point in found:
        if point.point not in own_centers and point.point not in unique:
            unique[point.point] = point
    return list(unique.values())


def non_snc_points(tree: ResolutionTree) -> list[NonSncPoint]:
    """
    Rational points of a plane-curve tree where the total transform is not SNC.

    Each chart only reports points of its own part of the space: the root owns
    the plane minus its centers, the first chart of a blow-up owns the new
    divisor minus one point, the second chart owns that point.

    Returns:
        Points sorted by coordinate size, then coordinates, then chart history
    """
    if len(tree.variables) != 2:
        raise ArityMismatchError(2, len(tree.variables))
    _check_squarefree(tree.f)
    points: list[NonSncPoint] = []
    for chart in tree.charts:
        points.extend(_chart_non_snc_points(tree, chart))
    return sorted(points, key=NonSncPoint.sort_key)


def _has_constant_partial(f: Polynomial) -> bool:
    for i in range(f.nvars):
        partial = partial_derivative(f, i)
        if partial.is_constant() and not partial.is_zero():
            return True
    return False


def snc_check(tree: ResolutionTree) -> SncCheck:
    """
    Check normal crossings of the total transform.

    Plane curves are checked exactly at all rational points; other trees are
    verified only when unblown and trivially smooth.
    """
    if len(tree.variables) != 2:
        if not tree.divisors and _has_constant_partial(tree.f):
            return SncCheck(SncStatus.VERIFIED)
        return SncCheck(SncStatus.UNVERIFIED, reason="automatic check covers plane curves only")
    try:
        points = non_snc_points(tree)
    except IrrationalCenterError as e:
        return SncCheck(SncStatus.UNVERIFIED, witness=e.witness, chart_id=e.chart_id, reason="non-rational locus")
    except NonSquarefreeError as e:
        return SncCheck(SncStatus.UNVERIFIED, reason=e.message)
    if not points:
        return SncCheck(SncStatus.VERIFIED)
    first = points[0]
    witness = "(" + ", ".join(str(c) for c in first.point) + ")"
    return SncCheck(SncStatus.UNVERIFIED, witness=witness, chart_id=first.chart_id, reason=first.reason)


def resolve_plane_curve(f: Polynomial, max_steps: int = 32) -> ResolutionTree:
    """
    Blow up rational non-SNC points of a plane curve until the total transform is SNC.

    Args:
        f: Squarefree polynomial in two variables
        max_steps: Blow-up budget

    Returns:
        A verified resolution tree
    """
    if f.nvars != 2:
        raise ArityMismatchError(2, f.nvars)
    builder = _TreeBuilder(f)
    _check_squarefree(f)
    while True:
        tree = builder.freeze(SncStatus.UNVERIFIED)
        points = non_snc_points(tree)
        if not points:
            break
        if len(builder.divisors) >= max_steps:
            raise MaxStepsExceededError(max_steps)
        target = points[0]
        logger.debug("Resolving non-SNC point", chart=target.chart_id, reason=target.reason)
        builder.blow_up(target.as_center())
    logger.debug("Plane curve resolved", f=format_poly(f), blowups=len(builder.divisors))
    return builder.freeze(SncStatus.VERIFIED)


def resolve_scripted(f: Polynomial, script: Sequence[BlowupCenter], snc_assertion: bool = False) -> ResolutionTree:
    """
    Apply a given sequence of blow-ups.

    Args:
        f: Defining polynomial
        script: Centers, each in a chart created by an earlier step (or the root "0")
        snc_assertion: Caller vouches for normal crossings

    Returns:
        The resolution tree; status asserted, verified or unverified
    """
    builder = _TreeBuilder(f)
    for center in script:
        builder.blow_up(center)
    if snc_assertion:
        return builder.freeze(SncStatus.ASSERTED)
    check = snc_check(builder.freeze(SncStatus.UNVERIFIED))
    return builder.freeze(check.status, check.witness)


def ord_along(g: Polynomial, tree: ResolutionTree) -> tuple[int, ...]:
    """Order of vanishing of the pullback of g along each exceptional divisor."""
    if g.is_zero():
        raise ZeroPolynomialError("ord_along")
    if g.variables != tree.variables:
        raise VariableMismatchError(g.variables, tree.variables)
    orders = []
    for divisor in tree.divisors:
        chart, index = tree.visible_chart(divisor.id)
        orders.append(coordinate_order(pull_back(g, chart), index))
    return tuple(orders)


def ord_along_in(g: Polynomial, tree: ResolutionTree, chart: Chart) -> dict[str, int]:
    """Orders of the pullback of g along the divisors visible in one chart."""
    pulled = pull_back(g, chart)
    return {did: coordinate_order(pulled, index) for index, did in chart.exceptional_locus.items()}


def jacobian_discrepancies(tree: ResolutionTree) -> tuple[int, ...]:
    """Discrepancies recomputed from the Jacobian determinant of the chart maps."""
    values = []
    for divisor in tree.divisors:
        chart, index = tree.visible_chart(divisor.id)
        values.append(coordinate_order(jacobian_determinant(list(chart.map_to_base)), index))
    return tuple(values)
