"""
Tests for multiplier ideals, E_f witnesses, lct and the Newton-polyhedron oracle.
"""

from fractions import Fraction

import pytest

from adjlab.core.blowup import BlowupCenter
from adjlab.core.multiplier import (
    CanonicalVerdict,
    MonomialIdeal,
    canonical_test,
    divides,
    find_ef_witnesses,
    howald_generators,
    howald_membership,
    in_multiplier_ideal,
    is_reduced,
    lct,
    minimalize,
    multiplier_generators,
    thresholds,
    witnesses_valid,
)
from adjlab.core.poly import parse_poly
from adjlab.core.resolution import resolve_plane_curve, resolve_scripted
from adjlab.utils.exceptions import (
    DimensionMismatchError,
    InvalidCoefficientError,
    NotMonomialError,
    UnverifiedSncError,
    ZeroPolynomialError,
)

PLANE = ("z1", "z2")
SPACE = ("x", "y", "z")


def p(text: str, variables=PLANE):
    return parse_poly(text, variables)


class TestMonomialIdeal:
    """Test cases for MonomialIdeal."""

    def test_minimal_generators(self):
        """Test that redundant generators are dropped."""
        assert minimalize([(2, 0), (1, 0), (0, 3), (1, 1)]) == ((0, 3), (1, 0))
        assert divides((1, 0), (2, 1))
        assert not divides((0, 2), (2, 1))

    def test_parse_and_format(self):
        """Test parsing from a comma-separated list."""
        ideal = MonomialIdeal.parse("z1^3, z2^2", PLANE)
        assert ideal.generators == ((3, 0), (0, 2))
        assert ideal.format() == ["z1^3", "z2^2"]
        assert ideal.contains((3, 1))
        assert not ideal.contains((2, 1))

    def test_parse_rejects_polynomials(self):
        """Test that generators must be monomials."""
        with pytest.raises(NotMonomialError):
            MonomialIdeal.parse("z1 + z2", PLANE)

    def test_dimension_checked(self):
        """Test exponent vectors of the wrong length."""
        with pytest.raises(DimensionMismatchError):
            MonomialIdeal.from_generators(PLANE, [(1, 0, 0)])

    def test_unit(self):
        """Test the unit ideal."""
        assert MonomialIdeal.unit(PLANE).is_unit
        assert MonomialIdeal.parse("1", PLANE).is_unit


class TestMultiplierIdeal:
    """Test cases for the divisorial multiplier ideal."""

    def test_cusp(self, cusp_tree):
        """Test J = (z1, z2) and lct 5/6 for the cusp."""
        report = multiplier_generators(cusp_tree)
        assert report.thresholds == (1, 1, 2)
        assert report.generators.format() == ["z1", "z2"]
        assert not report.is_unit
        assert report.lct == Fraction(5, 6)
        assert report.reduced

    def test_cusp_membership(self, cusp_tree):
        """Test membership of 1, z1 and z2."""
        assert not in_multiplier_ideal(p("1"), cusp_tree)
        assert in_multiplier_ideal(p("z1"), cusp_tree)
        assert in_multiplier_ideal(p("z2"), cusp_tree)
        assert in_multiplier_ideal(p("z1 + z2^7"), cusp_tree)

    def test_node(self, node_tree):
        """Test J = (z1, z2) and lct 1 for the node."""
        report = multiplier_generators(node_tree)
        assert report.generators.format() == ["z1", "z2"]
        assert report.lct == 1

    def test_smooth(self, smooth_tree):
        """Test that a smooth curve has the unit multiplier ideal."""
        report = multiplier_generators(smooth_tree)
        assert report.is_unit
        assert report.generators.is_unit
        assert report.lct == 1

    def test_cone(self, cone_tree):
        """Test that the cone has the unit multiplier ideal."""
        report = multiplier_generators(cone_tree)
        assert report.thresholds == (0,)
        assert report.is_unit
        assert report.lct == 1

    def test_unverified_tree_refused(self, cusp):
        """Test that an unresolved tree is rejected."""
        tree = resolve_scripted(cusp, [BlowupCenter.of("0", [0, 0])])
        with pytest.raises(UnverifiedSncError):
            multiplier_generators(tree)
        with pytest.raises(UnverifiedSncError):
            in_multiplier_ideal(p("z1"), tree)

    def test_zero_numerator(self, cusp_tree):
        """Test that membership needs a nonzero polynomial."""
        with pytest.raises(ZeroPolynomialError):
            in_multiplier_ideal(p("0"), cusp_tree)

    def test_translated_center_has_no_generators(self):
        """Test that generators are only enumerated for origin blow-ups."""
        tree = resolve_plane_curve(p("(z1 - 1)*(z2 - 2)"))
        report = multiplier_generators(tree)
        assert report.generators is None
        assert report.thresholds == (1,)
        assert in_multiplier_ideal(p("z1 - 1"), tree)
        assert not in_multiplier_ideal(p("z1"), tree)

    def test_extra_blowup_keeps_ideal(self, cusp, cusp_tree):
        """Test that an extra blow-up away from the curve does not change J."""
        tree = resolve_scripted(cusp, [*cusp_tree.centers(), BlowupCenter.of("0.2", [0, 0])])
        assert thresholds(tree) == (1, 1, 2, 0)
        assert multiplier_generators(tree).generators == multiplier_generators(cusp_tree).generators


class TestWitnesses:
    """Test cases for E_f witnesses."""

    def test_cusp(self, cusp_tree):
        """Test the witness set {z1^3, z2^2}."""
        ideal = find_ef_witnesses(cusp_tree)
        assert sorted(ideal.format()) == ["z1^3", "z2^2"]
        assert witnesses_valid(ideal, cusp_tree)

    def test_smooth(self, smooth_tree):
        """Test the witness set {z1, z2}."""
        assert sorted(find_ef_witnesses(smooth_tree).format()) == ["z1", "z2"]

    def test_node(self, node_tree):
        """Test the witness set {z1^2, z2^2}."""
        assert sorted(find_ef_witnesses(node_tree).format()) == ["z1^2", "z2^2"]

    def test_cone(self, cone_tree):
        """Test the witness set {x^2, y^2, z^2}."""
        assert sorted(find_ef_witnesses(cone_tree).format()) == ["x^2", "y^2", "z^2"]

    def test_invalid_declared_sets(self, cusp_tree):
        """Test the validity predicate on hand-written sets."""
        assert witnesses_valid(MonomialIdeal.parse("z1^3,z2^2", PLANE), cusp_tree)
        assert not witnesses_valid(MonomialIdeal.parse("z1^2,z2^2", PLANE), cusp_tree)
        assert not witnesses_valid(MonomialIdeal.parse("z1^4,z2^3", PLANE), cusp_tree)


class TestThresholds:
    """Test cases for lct, reducedness and the canonical test."""

    def test_non_reduced(self):
        """Test reducedness through the square-free decomposition."""
        assert not is_reduced(p("z1^2*z2"))
        assert is_reduced(p("z1*z2"))

    def test_canonical(self, cone_tree, smooth_tree, cusp_tree):
        """Test the canonical verdicts."""
        assert canonical_test(cone_tree, True) is CanonicalVerdict.CANONICAL
        assert canonical_test(smooth_tree, True) is CanonicalVerdict.CANONICAL
        assert canonical_test(cusp_tree, True) is CanonicalVerdict.NOT_CANONICAL
        assert canonical_test(cusp_tree, False) is CanonicalVerdict.NOT_APPLICABLE

    def test_lct_values(self, cusp_tree, cone_tree):
        """Test lct values."""
        assert lct(cusp_tree) == Fraction(5, 6)
        assert lct(cone_tree) == 1


class TestHowald:
    """Test cases for the Newton-polyhedron oracle."""

    def test_membership_cusp_ideal(self):
        """Test interior points of Newt(z1^3, z2^2)."""
        ideal = MonomialIdeal.parse("z1^3,z2^2", PLANE)
        assert howald_membership(ideal, (1, 0), 1)
        assert howald_membership(ideal, (0, 1), 1)
        assert not howald_membership(ideal, (0, 0), 1)

    def test_constant_monomial_at_threshold(self):
        """Test v = 0 against c * Newt(z1^3, z2^2), interior iff c < 5/6."""
        ideal = MonomialIdeal.parse("z1^3,z2^2", PLANE)
        assert not howald_membership(ideal, (0, 0), 1)
        assert not howald_membership(ideal, (0, 0), Fraction(5, 6))
        assert howald_membership(ideal, (0, 0), Fraction(4, 5))

    def test_constant_monomial_node_ideal(self):
        """Test that (1, 1) lies on the boundary of Newt(z1^2, z2^2)."""
        ideal = MonomialIdeal.parse("z1^2,z2^2", PLANE)
        assert not howald_membership(ideal, (0, 0), 1)
        assert howald_membership(ideal, (1, 0), 1)

    def test_generators_cusp_ideal(self):
        """Test that J(z1^3, z2^2) is the maximal ideal."""
        ideal = MonomialIdeal.parse("z1^3,z2^2", PLANE)
        assert howald_generators(ideal).format() == ["z1", "z2"]

    def test_generators_node_ideal(self):
        """Test that J(z1^2, z2^2) is the maximal ideal."""
        assert howald_generators(MonomialIdeal.parse("z1^2,z2^2", PLANE)).format() == ["z1", "z2"]

    def test_cone_witness_ideal(self):
        """Test that J(x^2, y^2, z^2) is the unit ideal."""
        ideal = MonomialIdeal.parse("x^2,y^2,z^2", SPACE)
        assert howald_membership(ideal, (0, 0, 0), 1)
        assert howald_generators(ideal).is_unit

    def test_coefficient_scales(self):
        """Test that a small c gives the unit ideal and c=2 a smaller one."""
        ideal = MonomialIdeal.parse("z1^3,z2^2", PLANE)
        assert howald_generators(ideal, Fraction(1, 2)).is_unit
        bigger = howald_generators(ideal, 2)
        assert not bigger.contains((1, 0))
        assert not bigger.contains((2, 1))
        assert bigger.contains((3, 1))

    def test_oracle_matches_divisorial_ideal(self, cusp_tree):
        """Test the oracle against J computed from the resolution."""
        witness = find_ef_witnesses(cusp_tree)
        assert howald_generators(witness).generators == multiplier_generators(cusp_tree).generators

    def test_nonpositive_coefficient(self):
        """Test that c must be positive."""
        ideal = MonomialIdeal.parse("z1", PLANE)
        with pytest.raises(InvalidCoefficientError):
            howald_membership(ideal, (0, 0), 0)
        with pytest.raises(InvalidCoefficientError):
            howald_generators(ideal, -1)
