"""
Multiplier ideals from resolution data, E_f witnesses, log canonical threshold
and the Newton-polyhedron oracle for monomial ideals.
"""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from loguru import logger
from sympy import Eq, Rational, Symbol, symbols
from sympy.solvers.simplex import lpmin

from ..utils.exceptions import (
    DimensionMismatchError,
    InvalidCoefficientError,
    NotMonomialError,
    NoWitnessError,
    UnverifiedSncError,
    ZeroPolynomialError,
)
from .blowup import Chart, pull_back, strict_transform_split
from .poly import Monomial, Polynomial, format_poly, monomials_up_to, parse_poly, restrict, sqf_list
from .resolution import ResolutionTree, SncStatus, ord_along


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimalize(monomials: Iterable[Monomial]) -> tuple[Monomial, ...]:
    """Drop monomials divisible by another one; result in graded-lex descending order."""
    kept: list[Monomial] = []
    for monom in sorted(set(monomials), key=lambda m: (sum(m), m)):
        if not any(divides(g, monom) for g in kept):
            kept.append(monom)
    return tuple(sorted(kept, key=lambda m: (sum(m), m), reverse=True))


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal generators."""

    variables: tuple[str, ...]
    generators: tuple[Monomial, ...]

    @classmethod
    def from_generators(cls, variables: Sequence[str], generators: Iterable[Monomial]) -> "MonomialIdeal":
        variables = tuple(variables)
        gens = [tuple(g) for g in generators]
        for g in gens:
            if len(g) != len(variables):
                raise DimensionMismatchError(len(variables), len(g))
        return cls(variables, minimalize(gens))

    @classmethod
    def unit(cls, variables: Sequence[str]) -> "MonomialIdeal":
        return cls(tuple(variables), ((0,) * len(variables),))

    @classmethod
    def parse(cls, text: str | Sequence[str], variables: Sequence[str]) -> "MonomialIdeal":
        """Parse ``"z1^3,z2^2"`` or a list of monomial strings."""
        items = text.split(",") if isinstance(text, str) else list(text)
        generators = []
        for item in items:
            p = parse_poly(item, variables)
            if len(p.terms) != 1:
                raise NotMonomialError(item.strip())
            generators.append(next(iter(p.terms)))
        return cls.from_generators(variables, generators)

    @property
    def is_unit(self) -> bool:
        return self.generators == ((0,) * len(self.variables),)

    def contains(self, monom: Monomial) -> bool:
        return any(divides(g, monom) for g in self.generators)

    def polynomials(self) -> list[Polynomial]:
        return [Polynomial.monomial(self.variables, g) for g in self.generators]

    def format(self) -> list[str]:
        return [format_poly(p) for p in self.polynomials()]


class CanonicalVerdict(str, Enum):
    CANONICAL = "canonical"
    NOT_CANONICAL = "not_canonical"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class MultiplierReport:
    """Multiplier ideal data of a resolved hypersurface; generators None outside the monomial situation."""

    thresholds: tuple[int, ...]
    generators: MonomialIdeal | None
    lct: Fraction
    is_unit: bool
    reduced: bool = True


def _require_snc(tree: ResolutionTree) -> None:
    if tree.snc_status not in (SncStatus.VERIFIED, SncStatus.ASSERTED):
        raise UnverifiedSncError(tree.snc_status.value)


def thresholds(tree: ResolutionTree) -> tuple[int, ...]:
    """``max(0, m_i - k_i)`` per exceptional divisor."""
    return tuple(max(0, d.m - d.k) for d in tree.divisors)


def in_multiplier_ideal(g: Polynomial, tree: ResolutionTree) -> bool:
    """Divisorial membership test for J(V)."""
    _require_snc(tree)
    if g.is_zero():
        raise ZeroPolynomialError("in_multiplier_ideal")
    orders = ord_along(g, tree)
    return all(o >= t for o, t in zip(orders, thresholds(tree)))


def _monomial_orders(tree: ResolutionTree, monom: Monomial) -> tuple[int, ...]:
    return ord_along(Polynomial.monomial(tree.variables, monom), tree)


def multiplier_generators(tree: ResolutionTree, degree_bound: int | None = None) -> MultiplierReport:
    """
    Compute J(V) for a resolved hypersurface.

    Args:
        tree: Tree with verified or asserted normal crossings
        degree_bound: Largest monomial degree enumerated (default: largest threshold + 1)

    Returns:
        Thresholds, minimal monomial generators (None outside the monomial situation), lct and unit flag
    """
    _require_snc(tree)
    limits = thresholds(tree)
    is_unit = all(t == 0 for t in limits)
    generators = None
    if tree.is_monomial():
        bound = degree_bound if degree_bound is not None else max(limits, default=0) + 1
        members = [
            monom
            for monom in monomials_up_to(len(tree.variables), bound)
            if all(o >= t for o, t in zip(_monomial_orders(tree, monom), limits))
        ]
        generators = MonomialIdeal.from_generators(tree.variables, members)
    else:
        logger.debug("Skipping generator enumeration for non-monomial tree")
    return MultiplierReport(
        thresholds=limits,
        generators=generators,
        lct=lct(tree),
        is_unit=is_unit,
        reduced=is_reduced(tree.f),
    )


def witnesses_valid(ideal: MonomialIdeal, tree: ResolutionTree) -> bool:
    """True when the generators' orders are all >= m with componentwise minimum exactly m."""
    if not ideal.generators:
        return False
    m = tree.m
    orders = [_monomial_orders(tree, g) for g in ideal.generators]
    if any(any(o < mi for o, mi in zip(order, m)) for order in orders):
        return False
    return tuple(min(column) for column in zip(*orders)) == m if m else True


def _generates_at_origin(tree: ResolutionTree, monom: Monomial, chart: Chart) -> bool:
    """Pullback equals a unit times the local equation of E_f at the chart origin."""
    pulled = pull_back(Polynomial.monomial(tree.variables, monom), chart)
    strict, orders = strict_transform_split(pulled, chart)
    for divisor_id, order in orders.items():
        if order != tree.divisor(divisor_id).m:
            return False
    origin = {i: 0 for i in range(len(chart.variables))}
    return not restrict(strict, origin).is_zero()


def find_ef_witnesses(tree: ResolutionTree, degree_bound: int | None = None) -> MonomialIdeal:
    """
    Find monomials whose pullbacks generate O(-E_f) at every final chart origin.

    Args:
        tree: Resolution tree
        degree_bound: Largest monomial degree tried (default: largest m + 1)

    Returns:
        A minimal witness ideal passing ``witnesses_valid``
    """
    m = tree.m
    bound = degree_bound if degree_bound is not None else max(m, default=0) + 1
    candidates = minimalize(
        monom
        for monom in monomials_up_to(len(tree.variables), bound)
        if all(o >= mi for o, mi in zip(_monomial_orders(tree, monom), m))
    )
    if not candidates:
        raise NoWitnessError(bound)

    chosen: list[Monomial] = []
    for leaf in tree.leaves():
        match = next((c for c in reversed(candidates) if _generates_at_origin(tree, c, leaf)), None)
        if match is None:
            logger.debug("No local witness", chart=leaf.id, degree_bound=bound)
            raise NoWitnessError(bound)
        chosen.append(match)
    ideal = MonomialIdeal.from_generators(tree.variables, chosen)
    if not witnesses_valid(ideal, tree):
        raise NoWitnessError(bound)
    return ideal


def is_reduced(f: Polynomial) -> bool:
    _, factors = sqf_list(f)
    return all(k == 1 for _, k in factors)


def lct(tree: ResolutionTree) -> Fraction:
    """Log canonical threshold ``min((k_i + 1) / m_i)`` together with the strict transform term."""
    _require_snc(tree)
    _, factors = sqf_list(tree.f)
    top = max((k for p, k in factors if not p.is_constant()), default=1)
    value = Fraction(1, top)
    for divisor in tree.divisors:
        if divisor.m > 0:
            value = min(value, Fraction(divisor.k + 1, divisor.m))
    return value


def canonical_test(tree: ResolutionTree, normal_assertion: bool) -> CanonicalVerdict:
    """Canonical iff V is asserted normal and J(V) is the unit ideal."""
    if not normal_assertion:
        return CanonicalVerdict.NOT_APPLICABLE
    _require_snc(tree)
    if all(t == 0 for t in thresholds(tree)):
        return CanonicalVerdict.CANONICAL
    return CanonicalVerdict.NOT_CANONICAL


# Newton polyhedron oracle


def howald_membership(ideal: MonomialIdeal, v: Monomial, c: Fraction | int) -> bool:
    """
    Test ``v + (1, ..., 1)`` against the interior of ``c * Newt(ideal)``.

    Solves ``min s`` over the generator simplex subject to
    ``c * sum(lambda_g * g_j) - s <= v_j`` with exact rationals; the point
    is interior iff the optimum is below 1.
    """
    c = Fraction(c)
    if c <= 0:
        raise InvalidCoefficientError(str(c))
    n = len(ideal.variables)
    if len(v) != n:
        raise DimensionMismatchError(n, len(v))
    if not ideal.generators:
        return False

    gens = ideal.generators
    scale = Rational(c.numerator, c.denominator)
    weights = symbols(f"lambda0:{len(gens)}")
    s = Symbol("s")
    constraints = [w >= 0 for w in weights]
    constraints.append(Eq(sum(weights), 1))
    for j in range(n):
        constraints.append(scale * sum(g[j] * w for g, w in zip(gens, weights)) - s <= v[j])
    optimum, _ = lpmin(s, constraints)
    return bool(optimum < 1)


def howald_generators(ideal: MonomialIdeal, c: Fraction | int = 1, degree_bound: int | None = None) -> MonomialIdeal:
    """Minimal generators of the multiplier ideal of ``c * ideal`` via the Newton polyhedron."""
    c = Fraction(c)
    if c <= 0:
        raise InvalidCoefficientError(str(c))
    if degree_bound is None:
        top = max((sum(g) for g in ideal.generators), default=0)
        degree_bound = math.ceil(c * top) + 1
    members = [
        monom
        for monom in monomials_up_to(len(ideal.variables), degree_bound)
        if howald_membership(ideal, monom, c)
    ]
    return MonomialIdeal.from_generators(ideal.variables, members)
