"""
Residue adjunction map on meromorphic top forms ``g dz / f``.
"""

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from loguru import logger

from ..utils.exceptions import (
    ArityMismatchError,
    FormMismatchError,
    SamplingError,
    VariableMismatchError,
    ZeroPartialDerivativeError,
    ZeroPolynomialError,
)
from .multiplier import in_multiplier_ideal
from .poly import Polynomial, evaluate_many, partial_derivative
from .resolution import ResolutionTree

# Differential forms with polynomial coefficients: sorted index tuple -> coefficient
Form = dict[tuple[int, ...], Polynomial]


@dataclass(frozen=True)
class MeromorphicTopForm:
    """``g dz_1 ^ ... ^ dz_n / f``."""

    g: Polynomial
    f: Polynomial

    def __post_init__(self) -> None:
        if self.f.is_zero():
            raise ZeroPolynomialError("MeromorphicTopForm")
        if self.g.variables != self.f.variables:
            raise VariableMismatchError(self.g.variables, self.f.variables)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.f.variables


@dataclass(frozen=True)
class ResidueForm:
    """``sign * g * dz_1 ^ ... (dz_mu omitted) ... ^ dz_n / (df/dz_mu)``, restricted to V; mu is 1-based."""

    sign: int
    mu: int
    numerator: Polynomial
    denominator: Polynomial

    @property
    def variables(self) -> tuple[str, ...]:
        return self.numerator.variables

    @property
    def omitted(self) -> tuple[int, ...]:
        """0-based indices of the differentials that remain."""
        return tuple(i for i in range(len(self.variables)) if i != self.mu - 1)


def adjunction_map(omega: MeromorphicTopForm, mu: int) -> ResidueForm:
    """
    Residue of omega along V by omitting ``dz_mu``.

    Args:
        omega: The meromorphic top form
        mu: 1-based index of the omitted differential

    Returns:
        The residue form with sign ``(-1)^(mu-1)``
    """
    n = len(omega.variables)
    if not 1 <= mu <= n:
        raise ArityMismatchError(n, mu)
    partial = partial_derivative(omega.f, mu - 1)
    if partial.is_zero():
        raise ZeroPartialDerivativeError(mu)
    return ResidueForm(sign=(-1) ** (mu - 1), mu=mu, numerator=omega.g, denominator=partial)


def _permutation_sign(indices: Sequence[int]) -> int:
    inversions = sum(1 for a, b in itertools.combinations(indices, 2) if a > b)
    return -1 if inversions % 2 else 1


def wedge(a: Form, b: Form) -> Form:
    """Exterior product; terms with a repeated differential vanish."""
    result: Form = {}
    for (left, p), (right, q) in itertools.product(a.items(), b.items()):
        if set(left) & set(right):
            continue
        joined = left + right
        key = tuple(sorted(joined))
        term = p * q * _permutation_sign(joined)
        result[key] = result[key] + term if key in result else term
    return {key: value for key, value in result.items() if not value.is_zero()}


def differential(f: Polynomial) -> Form:
    """``df`` as a 1-form."""
    return {(i,): partial_derivative(f, i) for i in range(f.nvars) if not partial_derivative(f, i).is_zero()}


def residue_identity_check(omega: MeromorphicTopForm, residue: ResidueForm) -> bool:
    """
    Check ``df ^ (sign * g * dz_hat_mu) = (df/dz_mu) * g * dz_1 ^ ... ^ dz_n`` exactly.

    Also checks that the residue carries omega's numerator and the matching partial.
    """
    n = len(omega.variables)
    if residue.variables != omega.variables or not 1 <= residue.mu <= n:
        return False
    partial = partial_derivative(omega.f, residue.mu - 1)
    if residue.numerator != omega.g or residue.denominator != partial:
        return False
    lhs = wedge(differential(omega.f), {residue.omitted: omega.g * residue.sign})
    full = tuple(range(n))
    expected = partial * omega.g
    if expected.is_zero():
        return not lhs
    return set(lhs) == {full} and lhs[full] == expected


def sample_regular_points(
    f: Polynomial,
    count: int,
    seed: int = 42,
    nonvanishing: Sequence[Polynomial] = (),
    threshold: float = 1e-6,
    max_attempts: int | None = None,
) -> np.ndarray:
    """
    Sample points of V = (f) by root-finding in one variable.

    Random complex values are drawn for all other coordinates; points where any
    polynomial in ``nonvanishing`` is numerically tiny are discarded.

    Args:
        f: Defining polynomial
        count: Number of points wanted
        seed: Seed of the numpy generator
        nonvanishing: Polynomials that must stay away from zero (usually partials of f)
        threshold: Smallest accepted absolute value
        max_attempts: Number of random draws before giving up (default 50 per point)

    Returns:
        Complex array of shape (count, n)
    """
    n = f.nvars
    solve = max(range(n), key=lambda i: (f.degree_in(i), -i))
    degree = f.degree_in(solve)
    if degree <= 0:
        raise SamplingError(count, 0)

    coefficients = [{} for _ in range(degree + 1)]
    for monom, coeff in f.terms.items():
        rest = monom[:solve] + (0,) + monom[solve + 1 :]
        coefficients[monom[solve]][rest] = coeff
    coefficient_polys = [Polynomial.from_terms(f.variables, terms) for terms in coefficients]

    rng = np.random.default_rng(seed)
    attempts = max_attempts if max_attempts is not None else 50 * count
    accepted: list[np.ndarray] = []
    for _ in range(attempts):
        if len(accepted) >= count:
            break
        point = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        values = [evaluate_many(p, point[None, :])[0] for p in coefficient_polys]
        if abs(values[-1]) < threshold:
            continue
        for root in np.roots(values[::-1]):
            candidate = point.copy()
            candidate[solve] = root
            checks = [abs(evaluate_many(p, candidate[None, :])[0]) for p in nonvanishing]
            if all(value >= threshold for value in checks):
                accepted.append(candidate)
                break
    if len(accepted) < count:
        raise SamplingError(count, len(accepted))
    return np.array(accepted[:count])


def tangent_frames(f: Polynomial, points: np.ndarray) -> np.ndarray:
    """Orthonormal bases of ``ker df_p``; shape (N, n-1, n)."""
    n = f.nvars
    gradients = np.stack([evaluate_many(partial_derivative(f, i), points) for i in range(n)], axis=1)
    frames = []
    for row in gradients:
        _, _, vh = np.linalg.svd(row[None, :])
        frames.append(np.conj(vh[1:]))
    return np.array(frames)


def evaluate_residue(residue: ResidueForm, points: np.ndarray, frames: np.ndarray) -> np.ndarray:
    """Value of the residue form on the tangent frame at each point."""
    coefficient = residue.sign * evaluate_many(residue.numerator, points) / evaluate_many(residue.denominator, points)
    keep = list(residue.omitted)
    minors = np.linalg.det(frames[:, :, keep]) if keep else np.ones(len(points))
    return coefficient * minors


def mu_consistency_check(
    omega: MeromorphicTopForm,
    mu1: int,
    mu2: int,
    points: np.ndarray | None = None,
    samples: int = 100,
    seed: int = 42,
    floor: float = 1e-12,
) -> float:
    """
    Largest relative deviation between two residues of omega on tangent frames of V.

    Args:
        omega: The meromorphic top form
        mu1: First omitted index (1-based)
        mu2: Second omitted index (1-based)
        points: Regular points of V (sampled when omitted)
        samples: Number of points to sample
        seed: Sampler seed
        floor: Lower bound of the relative-deviation denominator

    Returns:
        ``max |v1 - v2| / max(|v1|, |v2|, floor)``
    """
    first = adjunction_map(omega, mu1)
    second = adjunction_map(omega, mu2)
    if points is None:
        points = sample_regular_points(
            omega.f, samples, seed, nonvanishing=(first.denominator, second.denominator)
        )
    frames = tangent_frames(omega.f, points)
    v1 = evaluate_residue(first, points, frames)
    v2 = evaluate_residue(second, points, frames)
    scale = np.maximum(np.maximum(np.abs(v1), np.abs(v2)), floor)
    deviation = float(np.max(np.abs(v1 - v2) / scale)) if len(points) else 0.0
    logger.debug("Residue index consistency", mu1=mu1, mu2=mu2, points=len(points), deviation=deviation)
    return deviation


def l2_criterion(omega: MeromorphicTopForm, tree: ResolutionTree) -> bool:
    """Exact square-integrability of the residue of omega: ``g`` in J(V)."""
    if omega.f != tree.f:
        raise FormMismatchError("Form and resolution tree describe different hypersurfaces")
    return in_multiplier_ideal(omega.g, tree)
