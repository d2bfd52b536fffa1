"""
Exact sparse multivariate polynomials over the rationals.

A ``Polynomial`` wraps an element of the sympy ring ``QQ[variables]`` with
graded-lex order. Coefficients cross the public API as ``Fraction``.
"""

import itertools
import re
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from typing import Any, Union

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from ..utils.exceptions import (
    ArityMismatchError,
    NegativeExponentError,
    NotDivisibleError,
    PolynomialSyntaxError,
    UnknownVariableError,
    VariableMismatchError,
    ZeroPolynomialError,
)

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@lru_cache(maxsize=None)
def polynomial_ring(variables: tuple[str, ...]) -> PolyRing:
    """Return the graded-lex ring ``QQ[variables]``."""
    if not variables:
        raise ArityMismatchError(1, 0)
    for name in variables:
        if not _IDENTIFIER.fullmatch(name):
            raise PolynomialSyntaxError(f"Invalid variable name '{name}'", 0)
    return PolyRing(variables, QQ, grlex)


def to_qq(value: Scalar) -> Any:
    """Convert an int or Fraction into a ground-domain rational."""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def to_fraction(coeff: Any) -> Fraction:
    """Convert a ground-domain rational into a Fraction."""
    return Fraction(int(coeff.numerator), int(coeff.denominator))


class Polynomial:
    """Immutable polynomial over exact rationals in a fixed, ordered variable list."""

    __slots__ = ("_element", "_variables")

    def __init__(self, element: PolyElement, variables: Sequence[str]):
        self._variables = tuple(variables)
        self._element = element

    @classmethod
    def from_terms(cls, variables: Sequence[str], terms: Mapping[Monomial, Scalar]) -> "Polynomial":
        """Build a polynomial from a map exponent-vector -> coefficient."""
        variables = tuple(variables)
        ring = polynomial_ring(variables)
        element = ring.zero
        for monom, coeff in terms.items():
            if len(monom) != len(variables):
                raise ArityMismatchError(len(variables), len(monom))
            if any(e < 0 for e in monom):
                raise NegativeExponentError(0)
            if coeff:
                element += ring.term_new(tuple(int(e) for e in monom), to_qq(coeff))
        return cls(element, variables)

    @classmethod
    def constant(cls, variables: Sequence[str], value: Scalar) -> "Polynomial":
        variables = tuple(variables)
        return cls(polynomial_ring(variables).ground_new(to_qq(value)), variables)

    @classmethod
    def variable(cls, variables: Sequence[str], index: int) -> "Polynomial":
        variables = tuple(variables)
        return cls(polynomial_ring(variables).gens[index], variables)

    @classmethod
    def monomial(cls, variables: Sequence[str], exponents: Monomial) -> "Polynomial":
        return cls.from_terms(variables, {tuple(exponents): 1})

    @property
    def variables(self) -> tuple[str, ...]:
        return self._variables

    @property
    def element(self) -> PolyElement:
        """Underlying sympy ring element (treat as read-only)."""
        return self._element

    @property
    def ring(self) -> PolyRing:
        return self._element.ring

    @property
    def nvars(self) -> int:
        return len(self._variables)

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        """Terms in descending graded-lex order."""
        ordered = sorted(self._element.items(), key=lambda item: grlex(item[0]), reverse=True)
        return {monom: to_fraction(coeff) for monom, coeff in ordered}

    def is_zero(self) -> bool:
        return not self._element

    def is_constant(self) -> bool:
        return self._element.is_ground

    def constant_value(self) -> Fraction:
        """Coefficient of the zero monomial."""
        return to_fraction(self._element.coeff(1))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._element:
            return -1
        return max(sum(monom) for monom in self._element.itermonoms())

    def degree_in(self, var_index: int) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self._element:
            return -1
        return max(monom[var_index] for monom in self._element.itermonoms())

    def rename(self, variables: Sequence[str]) -> "Polynomial":
        """Same coefficients over a new list of variable names of equal length."""
        variables = tuple(variables)
        if len(variables) != self.nvars:
            raise ArityMismatchError(self.nvars, len(variables))
        return Polynomial(polynomial_ring(variables).from_dict(dict(self._element)), variables)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic greatest common divisor (zero only if both are zero)."""
        self._check_compatible(other)
        g = self._element.gcd(other._element)
        if g:
            g = g.quo_ground(g.LC)
        return Polynomial(g, self._variables)

    def exquo(self, other: "Polynomial") -> "Polynomial":
        """Exact quotient; raises when the division leaves a remainder."""
        self._check_compatible(other)
        if other.is_zero():
            raise ZeroPolynomialError("Division")
        q, r = self._element.div(other._element)
        if r:
            raise NotDivisibleError(f"{format_poly(other)} does not divide {format_poly(self)}")
        return Polynomial(q, self._variables)

    def _check_compatible(self, other: "Polynomial") -> None:
        if self._variables != other._variables:
            raise VariableMismatchError(self._variables, other._variables)

    def _coerce(self, other: Any) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            self._check_compatible(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self._variables, other)
        return None

    def __add__(self, other: Any) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Polynomial(self._element + rhs._element, self._variables)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Polynomial(self._element - rhs._element, self._variables)

    def __rsub__(self, other: Any) -> "Polynomial":
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return Polynomial(lhs._element - self._element, self._variables)

    def __mul__(self, other: Any) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Polynomial(self._element * rhs._element, self._variables)

    __rmul__ = __mul__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self._element, self._variables)

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            raise NegativeExponentError(0)
        return Polynomial(self._element**exponent, self._variables)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._variables == other._variables and dict(self._element) == dict(other._element)

    def __hash__(self) -> int:
        return hash((self._variables, frozenset(self._element.items())))

    def __bool__(self) -> bool:
        return bool(self._element)

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r}, variables={list(self._variables)!r})"

    def __str__(self) -> str:
        return format_poly(self)


# Parsing


class _Parser:
    """Recursive-descent parser for the polynomial grammar."""

    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.variables = variables
        self.index = {name: i for i, name in enumerate(variables)}
        self.pos = 0

    def parse(self) -> Polynomial:
        self._skip()
        if self.pos >= len(self.text):
            raise PolynomialSyntaxError("Empty expression", self.pos)
        result = self._expr()
        self._skip()
        if self.pos < len(self.text):
            raise PolynomialSyntaxError(f"Unexpected character '{self.text[self.pos]}'", self.pos)
        return result

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _peek_power(self) -> bool:
        self._skip()
        return self.text.startswith("^", self.pos) or self.text.startswith("**", self.pos)

    def _expr(self) -> Polynomial:
        result = self._term()
        while self._peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self._term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _term(self) -> Polynomial:
        result = self._unary()
        while True:
            if self._peek_power():
                break
            op = self._peek()
            if op not in ("*", "/"):
                break
            op_pos = self.pos
            self.pos += 1
            rhs = self._unary()
            if op == "*":
                result = result * rhs
            else:
                if not rhs.is_constant():
                    raise PolynomialSyntaxError("Division by a non-constant expression", op_pos)
                divisor = rhs.constant_value()
                if divisor == 0:
                    raise PolynomialSyntaxError("Division by zero", op_pos)
                result = result * Polynomial.constant(self.variables, 1 / divisor)
        return result

    def _unary(self) -> Polynomial:
        op = self._peek()
        if op == "-":
            self.pos += 1
            return -self._unary()
        if op == "+":
            self.pos += 1
            return self._unary()
        return self._power()

    def _power(self) -> Polynomial:
        base = self._atom()
        if self._peek_power():
            self.pos += 2 if self.text.startswith("**", self.pos) else 1
            self._skip()
            exp_pos = self.pos
            negative = False
            if self._peek() in ("-", "+"):
                negative = self.text[self.pos] == "-"
                self.pos += 1
            self._skip()
            match = re.compile(r"\d+").match(self.text, self.pos)
            if not match:
                raise PolynomialSyntaxError("Expected an integer exponent", self.pos)
            self.pos = match.end()
            exponent = int(match.group())
            if negative and exponent != 0:
                raise NegativeExponentError(exp_pos)
            base = base**exponent
        return base

    def _atom(self) -> Polynomial:
        self._skip()
        if self.pos >= len(self.text):
            raise PolynomialSyntaxError("Unexpected end of input", self.pos)
        char = self.text[self.pos]
        if char == "(":
            self.pos += 1
            inner = self._expr()
            if self._peek() != ")":
                raise PolynomialSyntaxError("Expected ')'", self.pos)
            self.pos += 1
            return inner
        if char.isdigit():
            match = re.compile(r"\d+").match(self.text, self.pos)
            self.pos = match.end()
            return Polynomial.constant(self.variables, int(match.group()))
        match = _IDENTIFIER.match(self.text, self.pos)
        if match:
            name = match.group()
            if name not in self.index:
                raise UnknownVariableError(name, self.pos)
            self.pos = match.end()
            return Polynomial.variable(self.variables, self.index[name])
        raise PolynomialSyntaxError(f"Unexpected character '{char}'", self.pos)


def parse_poly(text: str, variables: Sequence[str]) -> Polynomial:
    """
    Parse a polynomial expression over the declared variables.

    Accepts integer literals, +, -, *, / by nonzero constants, ^ or ** with
    non-negative integer exponents and parentheses; whitespace is ignored.

    Args:
        text: Expression text
        variables: Ordered variable names

    Returns:
        The expanded polynomial
    """
    return _Parser(text, tuple(variables)).parse()


def _format_coefficient(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_poly(p: Polynomial) -> str:
    """Render p in the interchange grammar, terms in descending graded-lex order."""
    pieces: list[str] = []
    for monom, coeff in p.terms.items():
        factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(p.variables, monom) if e]
        magnitude = abs(coeff)
        if not factors:
            body = _format_coefficient(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coefficient(magnitude), *factors])
        if not pieces:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(pieces) if pieces else "0"


# Algebra


def substitute(p: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """
    Replace each variable of p by its image polynomial and expand.

    Args:
        p: Polynomial to transform
        images: One polynomial per variable of p, all over one common variable list

    Returns:
        The composite polynomial over the images' variables
    """
    if len(images) != p.nvars:
        raise ArityMismatchError(p.nvars, len(images))
    if not images:
        return p
    target = images[0].variables
    for image in images[1:]:
        if image.variables != target:
            raise VariableMismatchError(target, image.variables)

    ring = polynomial_ring(target)
    cache: dict[tuple[int, int], PolyElement] = {}

    def power(i: int, e: int) -> PolyElement:
        key = (i, e)
        if key not in cache:
            cache[key] = images[i].element**e
        return cache[key]

    result = ring.zero
    for monom, coeff in p.element.items():
        term = ring.ground_new(coeff)
        for i, e in enumerate(monom):
            if e:
                term = term * power(i, e)
        result += term
    return Polynomial(result, target)


def substitute_with_denominator(
    p: Polynomial, numerators: Sequence[Polynomial], denominator: Polynomial, exponents: Sequence[int]
) -> tuple[Polynomial, int]:
    """
    Substitute rational images ``N_k / D^{e_k}`` into p and clear denominators.

    Args:
        p: Polynomial to transform
        numerators: Image numerators ``N_k``, one per variable of p
        denominator: The common base ``D``
        exponents: Powers ``e_k`` of ``D`` under each numerator

    Returns:
        ``(Q, E)`` with ``p(N / D^e) = Q / D^E``
    """
    if len(numerators) != p.nvars:
        raise ArityMismatchError(p.nvars, len(numerators))
    if len(exponents) != p.nvars:
        raise ArityMismatchError(p.nvars, len(exponents))
    target = denominator.variables
    if p.is_zero():
        return Polynomial.constant(target, 0), 0

    weights = {monom: sum(a * e for a, e in zip(monom, exponents)) for monom in p.element.itermonoms()}
    cleared = max(weights.values())
    result = Polynomial.constant(target, 0)
    for monom, coeff in p.terms.items():
        term = Polynomial.constant(target, coeff)
        for numerator, a in zip(numerators, monom):
            if a:
                term = term * numerator**a
        result = result + term * denominator ** (cleared - weights[monom])
    return result, cleared


def partial_derivative(p: Polynomial, var_index: int) -> Polynomial:
    """Formal partial derivative in the variable at var_index."""
    if not 0 <= var_index < p.nvars:
        raise ArityMismatchError(p.nvars, var_index + 1)
    return Polynomial(p.element.diff(p.ring.gens[var_index]), p.variables)


def coordinate_order(p: Polynomial, var_index: int) -> int:
    """Largest m with ``var^m`` dividing p."""
    if p.is_zero():
        raise ZeroPolynomialError("coordinate_order")
    return min(monom[var_index] for monom in p.element.itermonoms())


def divide_by_coordinate_power(p: Polynomial, var_index: int, m: int) -> Polynomial:
    """Exact quotient of p by ``var^m``."""
    if m == 0:
        return p
    terms: dict[Monomial, Fraction] = {}
    for monom, coeff in p.terms.items():
        if monom[var_index] < m:
            raise NotDivisibleError(f"{p.variables[var_index]}^{m} does not divide {format_poly(p)}")
        shifted = list(monom)
        shifted[var_index] -= m
        terms[tuple(shifted)] = coeff
    return Polynomial.from_terms(p.variables, terms)


def restrict(p: Polynomial, assignments: Mapping[int, Scalar]) -> Polynomial:
    """Set some variables to rational constants, keeping the variable list."""
    element = p.element
    for index, value in sorted(assignments.items()):
        element = element.subs(p.ring.gens[index], to_qq(value))
    return Polynomial(element, p.variables)


def evaluate(p: Polynomial, point: Sequence[complex]) -> complex:
    """Evaluate p at a complex point in double precision."""
    if len(point) != p.nvars:
        raise ArityMismatchError(p.nvars, len(point))
    total = 0j
    for monom, coeff in p.terms.items():
        value = complex(float(coeff))
        for z, e in zip(point, monom):
            if e:
                value *= complex(z) ** e
        total += value
    return total


def evaluate_many(p: Polynomial, points: np.ndarray) -> np.ndarray:
    """
    Evaluate p at many complex points.

    Args:
        p: Polynomial to evaluate
        points: Array of shape (N, nvars)

    Returns:
        Complex array of shape (N,)
    """
    points = np.asarray(points, dtype=np.complex128)
    if points.ndim != 2 or points.shape[1] != p.nvars:
        raise ArityMismatchError(p.nvars, points.shape[-1] if points.ndim else 0)
    total = np.zeros(points.shape[0], dtype=np.complex128)
    for monom, coeff in p.terms.items():
        value = np.full(points.shape[0], float(coeff), dtype=np.complex128)
        for i, e in enumerate(monom):
            if e:
                value = value * points[:, i] ** e
        total += value
    return total


def resultant(p: Polynomial, q: Polynomial, var_index: int) -> Polynomial:
    """Resultant of p and q with respect to one variable, over the original variable list."""
    p._check_compatible(q)
    n = p.nvars
    order = (var_index, *(i for i in range(n) if i != var_index))
    ring = polynomial_ring(tuple(p.variables[i] for i in order))
    res = p.element.set_ring(ring).resultant(q.element.set_ring(ring))
    if n == 1:
        return Polynomial.constant(p.variables, to_fraction(res))
    terms: dict[Monomial, Fraction] = {}
    for monom, coeff in res.items():
        full = [0] * n
        for position, e in zip(order[1:], monom):
            full[position] = e
        terms[tuple(full)] = to_fraction(coeff)
    return Polynomial.from_terms(p.variables, terms)


def factor_list(p: Polynomial) -> tuple[Fraction, list[tuple[Polynomial, int]]]:
    """Irreducible factorization over the rationals."""
    if p.is_zero():
        raise ZeroPolynomialError("factor_list")
    coeff, factors = p.element.factor_list()
    return to_fraction(coeff), [(Polynomial(g, p.variables), k) for g, k in factors]


def sqf_list(p: Polynomial) -> tuple[Fraction, list[tuple[Polynomial, int]]]:
    """Square-free decomposition over the rationals."""
    if p.is_zero():
        raise ZeroPolynomialError("sqf_list")
    coeff, factors = p.element.sqf_list()
    return to_fraction(coeff), [(Polynomial(g, p.variables), k) for g, k in factors]


def linear_root(p: Polynomial, var_index: int) -> Fraction | None:
    """Root of a polynomial of degree 1 in a single variable, else None."""
    if p.degree() != 1 or p.degree_in(var_index) != 1:
        return None
    terms = p.terms
    unit = tuple(1 if i == var_index else 0 for i in range(p.nvars))
    if set(terms) - {unit, (0,) * p.nvars}:
        return None
    return -terms.get((0,) * p.nvars, Fraction(0)) / terms[unit]


def jacobian_determinant(maps: Sequence[Polynomial]) -> Polynomial:
    """Determinant of the Jacobian matrix of a polynomial map (Leibniz expansion)."""
    if not maps:
        raise ArityMismatchError(1, 0)
    variables = maps[0].variables
    n = len(variables)
    if len(maps) != n:
        raise ArityMismatchError(n, len(maps))
    matrix = [[partial_derivative(component, j) for j in range(n)] for component in maps]
    result = Polynomial.constant(variables, 0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = Polynomial.constant(variables, -1 if inversions % 2 else 1)
        for row, col in enumerate(perm):
            term = term * matrix[row][col]
            if term.is_zero():
                break
        result = result + term
    return result


def monomials_up_to(nvars: int, degree_bound: int) -> Iterable[Monomial]:
    """Exponent vectors of total degree <= degree_bound in graded-lex ascending order."""
    for total in range(degree_bound + 1):
        level = [
            monom
            for monom in itertools.product(range(total + 1), repeat=nvars)
            if sum(monom) == total
        ]
        yield from sorted(level, key=grlex)
