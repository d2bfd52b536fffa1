"""
Point blow-ups of affine charts.
"""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from loguru import logger

from ..utils.exceptions import CenterNotInChartError, VariableMismatchError, ZeroPolynomialError
from .poly import (
    Polynomial,
    coordinate_order,
    divide_by_coordinate_power,
    substitute,
    substitute_with_denominator,
)


@dataclass(frozen=True)
class BlowupCenter:
    """A rational point of a chart, in that chart's coordinates."""

    chart_id: str
    point: tuple[Fraction, ...]

    @classmethod
    def of(cls, chart_id: str, point: Sequence[int | Fraction | str]) -> "BlowupCenter":
        return cls(chart_id, tuple(Fraction(c) for c in point))

    @property
    def is_origin(self) -> bool:
        return all(c == 0 for c in self.point)


@dataclass(frozen=True)
class Chart:
    """
    An affine chart of a blown-up space.

    ``map_to_base`` expresses the base coordinates in this chart's variables;
    ``local_map`` expresses the parent chart's coordinates the same way.
    """

    id: str
    variables: tuple[str, ...]
    base_variables: tuple[str, ...]
    map_to_base: tuple[Polynomial, ...]
    exceptional_locus: Mapping[int, str] = field(default_factory=dict)
    parent: str | None = None
    local_map: tuple[Polynomial, ...] = ()
    birth_index: int | None = None
    center: BlowupCenter | None = None

    @property
    def depth(self) -> int:
        return self.id.count(".")

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def divisor_coordinate(self, divisor_id: str) -> int | None:
        """Index of the coordinate cutting out a divisor in this chart, if any."""
        for index, did in self.exceptional_locus.items():
            if did == divisor_id:
                return index
        return None

    def path_key(self) -> tuple[int, ...]:
        """Sort key following the blow-up history."""
        return tuple(int(part) for part in self.id.split("."))


def root_chart(base_variables: Sequence[str]) -> Chart:
    """The identity chart on the base."""
    base = tuple(base_variables)
    identity = tuple(Polynomial.variable(base, i) for i in range(len(base)))
    return Chart(id="0", variables=base, base_variables=base, map_to_base=identity)


def chart_variables(base_variables: Sequence[str], depth: int) -> tuple[str, ...]:
    """Variable names of charts at a given blow-up depth."""
    if depth == 0:
        return tuple(base_variables)
    return tuple(f"{name}_{depth}" for name in base_variables)


def blowup_point_charts(
    chart: Chart, center: BlowupCenter, new_divisor_id: str, first_child: int = 1
) -> list[Chart]:
    """
    Blow up a rational point of a chart.

    In chart i, after translating the center to the origin, the parent
    coordinates are ``u_j = p_j + w_j*w_i`` for j != i and ``u_i = p_i + w_i``.

    Args:
        chart: Chart containing the center
        center: The point to blow up
        new_divisor_id: Identifier of the new exceptional divisor
        first_child: Number given to the first child in its chart id

    Returns:
        The n charts covering the blow-up
    """
    n = chart.dimension
    if center.chart_id != chart.id:
        raise CenterNotInChartError(center.chart_id, f"center given for chart '{center.chart_id}', not '{chart.id}'")
    if len(center.point) != n:
        raise CenterNotInChartError(chart.id, f"center has {len(center.point)} coordinates, chart has {n}")

    variables = chart_variables(chart.base_variables, chart.depth + 1)
    gens = [Polynomial.variable(variables, j) for j in range(n)]
    charts = []
    for i in range(n):
        local = []
        for j in range(n):
            moved = gens[j] if j == i else gens[j] * gens[i]
            local.append(moved + center.point[j])
        local_map = tuple(local)
        map_to_base = tuple(substitute(component, local_map) for component in chart.map_to_base)

        locus = {i: new_divisor_id}
        for j, divisor_id in chart.exceptional_locus.items():
            if j != i and center.point[j] == 0:
                locus[j] = divisor_id

        charts.append(
            Chart(
                id=f"{chart.id}.{first_child + i}",
                variables=variables,
                base_variables=chart.base_variables,
                map_to_base=map_to_base,
                exceptional_locus=dict(sorted(locus.items())),
                parent=chart.id,
                local_map=local_map,
                birth_index=i,
                center=center,
            )
        )
    logger.debug("Blew up point", chart=chart.id, point=[str(c) for c in center.point], divisor=new_divisor_id)
    return charts


def pull_back(p: Polynomial, chart: Chart) -> Polynomial:
    """Pull a base polynomial back to a chart."""
    if p.variables != chart.base_variables:
        raise VariableMismatchError(p.variables, chart.base_variables)
    return substitute(p, chart.map_to_base)


def strict_transform_split(pullback: Polynomial, chart: Chart) -> tuple[Polynomial, dict[str, int]]:
    """
    Split a pullback into its strict transform and exceptional multiplicities.

    Returns:
        ``(strict, {divisor_id: order})``
    """
    if pullback.is_zero():
        raise ZeroPolynomialError("strict_transform_split")
    strict = pullback
    multiplicities: dict[str, int] = {}
    for index, divisor_id in sorted(chart.exceptional_locus.items()):
        order = coordinate_order(strict, index)
        strict = divide_by_coordinate_power(strict, index, order)
        multiplicities[divisor_id] = order
    return strict, multiplicities


def chart_transition(a: Chart, b: Chart) -> tuple[tuple[Polynomial, ...], Polynomial, tuple[int, ...]]:
    """
    Coordinate change from sibling chart b to sibling chart a.

    The coordinates of a are ``N_k / D^{e_k}`` in the coordinates of b.

    Returns:
        ``(numerators, D, exponents)`` over b's variables
    """
    if a.parent is None or a.parent != b.parent or a.center != b.center:
        raise CenterNotInChartError(a.id, f"chart '{b.id}' is not a sibling of '{a.id}'")
    i, j = a.birth_index, b.birth_index
    n = b.dimension
    gens = [Polynomial.variable(b.variables, k) for k in range(n)]
    one = Polynomial.constant(b.variables, 1)
    if i == j:
        return tuple(gens), one, (0,) * n

    numerators = []
    exponents = []
    for k in range(n):
        if k == i:
            numerators.append(gens[i] * gens[j])
            exponents.append(0)
        elif k == j:
            numerators.append(one)
            exponents.append(1)
        else:
            numerators.append(gens[k])
            exponents.append(1)
    return tuple(numerators), gens[i], tuple(exponents)


def transition_agrees(p: Polynomial, a: Chart, b: Chart) -> bool:
    """Check that the pullbacks of p to two sibling charts agree under their coordinate change."""
    numerators, denominator, exponents = chart_transition(a, b)
    on_a = pull_back(p, a)
    moved, cleared = substitute_with_denominator(on_a, numerators, denominator, exponents)
    return moved == pull_back(p, b) * denominator**cleared
