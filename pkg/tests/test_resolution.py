"""
Tests for resolution trees, divisor data and normal-crossing checks.
"""

import pytest

from adjlab.core.blowup import BlowupCenter, transition_agrees
from adjlab.core.poly import format_poly, parse_poly
from adjlab.core.resolution import (
    SncStatus,
    jacobian_discrepancies,
    non_snc_points,
    ord_along,
    ord_along_in,
    resolve_plane_curve,
    resolve_scripted,
    snc_check,
)
from adjlab.utils.exceptions import (
    ArityMismatchError,
    CenterNotInChartError,
    IrrationalCenterError,
    MaxStepsExceededError,
    NonSquarefreeError,
    ZeroPolynomialError,
)

PLANE = ("z1", "z2")


def p(text: str, variables=PLANE):
    return parse_poly(text, variables)


class TestCuspResolution:
    """Test cases for the resolution of the cusp."""

    def test_divisor_data(self, cusp_tree):
        """Test m and k of the three exceptional divisors."""
        assert cusp_tree.m == (2, 3, 6)
        assert cusp_tree.k == (1, 2, 4)
        assert [d.birth_step for d in cusp_tree.divisors] == [1, 2, 3]
        assert cusp_tree.snc_status is SncStatus.VERIFIED

    def test_chart_ids(self, cusp_tree):
        """Test the chart hierarchy."""
        assert [c.id for c in cusp_tree.charts] == ["0", "0.1", "0.2", "0.1.1", "0.1.2", "0.1.2.1", "0.1.2.2"]
        assert [c.id for c in cusp_tree.leaves()] == ["0.2", "0.1.1", "0.1.2.1", "0.1.2.2"]
        assert cusp_tree.is_monomial()

    def test_final_chart_maps(self, cusp_tree):
        """Test the composite maps of the last two charts."""
        assert [format_poly(q) for q in cusp_tree.chart("0.1.2.1").map_to_base] == [
            "z1_3^2*z2_3",
            "z1_3^3*z2_3^2",
        ]
        assert [format_poly(q) for q in cusp_tree.chart("0.1.2.2").map_to_base] == [
            "z1_3*z2_3^2",
            "z1_3*z2_3^3",
        ]

    def test_total_transform_in_final_chart(self, cusp_tree):
        """Test that E_f reads 2E1 + 3E2 + 6E3 where all three meet."""
        chart = cusp_tree.chart("0.1.2.1")
        orders = ord_along_in(cusp_tree.f, cusp_tree, chart)
        assert orders == {"E3": 6, "E2": 3}

    def test_orders_of_coordinates(self, cusp_tree):
        """Test the orders of z1 and z2 along the divisors."""
        assert ord_along(p("z1"), cusp_tree) == (1, 1, 2)
        assert ord_along(p("z2"), cusp_tree) == (1, 2, 3)
        assert ord_along(p("1"), cusp_tree) == (0, 0, 0)

    def test_jacobian_discrepancies_agree(self, cusp_tree):
        """Test k against the Jacobian determinant of the chart maps."""
        assert jacobian_discrepancies(cusp_tree) == cusp_tree.k

    def test_no_points_left(self, cusp_tree):
        """Test that the resolved tree has no non-SNC points."""
        assert non_snc_points(cusp_tree) == []

    def test_partial_resolution_has_triple_point(self, cusp):
        """Test that stopping after two blow-ups leaves three components through a point."""
        script = [BlowupCenter.of("0", [0, 0]), BlowupCenter.of("0.1", [0, 0])]
        tree = resolve_scripted(cusp, script)
        assert tree.snc_status is SncStatus.UNVERIFIED
        points = non_snc_points(tree)
        assert points[0].chart_id == "0.1.2"
        assert points[0].reason == "three components through a point"

    def test_overlaps_consistent(self, cusp_tree):
        """Test that the cusp pullbacks agree on every sibling overlap."""
        for chart in cusp_tree.charts:
            siblings = cusp_tree.children(chart.id)
            for a in siblings:
                for b in siblings:
                    assert transition_agrees(cusp_tree.f, a, b)

    def test_script_reproduces_automatic_tree(self, cusp, cusp_tree):
        """Test that replaying the automatic centers gives the same divisors."""
        tree = resolve_scripted(cusp, cusp_tree.centers())
        assert tree.m == cusp_tree.m
        assert tree.k == cusp_tree.k
        assert tree.snc_status is SncStatus.VERIFIED


class TestOtherCurves:
    """Test cases for simpler plane curves."""

    def test_node(self, node_tree):
        """Test the node z1*z2: one blow-up with m=2, k=1."""
        assert node_tree.m == (2,)
        assert node_tree.k == (1,)

    def test_smooth_curve_needs_no_blowup(self):
        """Test that a smooth curve is already SNC."""
        tree = resolve_plane_curve(p("z1 - z2^2"))
        assert tree.divisors == ()
        assert tree.snc_status is SncStatus.VERIFIED

    def test_scripted_smooth_blowup(self, smooth_tree):
        """Test one blow-up of a smooth line: m=1, k=1."""
        assert smooth_tree.m == (1,)
        assert smooth_tree.k == (1,)
        assert smooth_tree.snc_status is SncStatus.VERIFIED

    def test_tacnode(self):
        """Test that the tacnode needs two blow-ups."""
        tree = resolve_plane_curve(p("z2^2 - z1^4"))
        assert len(tree.divisors) >= 2
        assert tree.snc_status is SncStatus.VERIFIED
        assert jacobian_discrepancies(tree) == tree.k

    def test_singularity_away_from_origin(self):
        """Test a node at a rational point other than the origin."""
        tree = resolve_plane_curve(p("(z1 - 1)*(z2 - 2)"))
        assert tree.m == (2,)
        assert tree.centers()[0].point == (1, 2)
        assert not tree.is_monomial()

    def test_irrational_center(self):
        """Test that singular points with irrational coordinates are rejected."""
        with pytest.raises(IrrationalCenterError):
            resolve_plane_curve(p("z2^2 - (z1^2 - 2)^2"))

    def test_non_squarefree(self):
        """Test that repeated factors are rejected."""
        with pytest.raises(NonSquarefreeError):
            resolve_plane_curve(p("z1^2*z2"))

    def test_max_steps(self, cusp):
        """Test the blow-up budget."""
        with pytest.raises(MaxStepsExceededError):
            resolve_plane_curve(cusp, max_steps=2)

    def test_plane_curves_only(self, cone):
        """Test that the automatic resolver needs two variables."""
        with pytest.raises(ArityMismatchError):
            resolve_plane_curve(cone)

    def test_zero_polynomial(self):
        """Test that V must be a hypersurface."""
        with pytest.raises(ZeroPolynomialError):
            resolve_plane_curve(p("0"))


class TestScripts:
    """Test cases for scripted resolutions."""

    def test_cone_asserted(self, cone_tree):
        """Test the cone: one divisor with m=2, k=2."""
        assert cone_tree.m == (2,)
        assert cone_tree.k == (2,)
        assert cone_tree.snc_status is SncStatus.ASSERTED
        assert len(cone_tree.leaves()) == 3

    def test_cone_discrepancy_from_jacobian(self, cone_tree):
        """Test k = n - 1 for a point blow-up in three variables."""
        assert jacobian_discrepancies(cone_tree) == (2,)

    def test_unasserted_surface_is_unverified(self, cone):
        """Test that surfaces are not checked automatically."""
        tree = resolve_scripted(cone, [BlowupCenter.of("0", [0, 0, 0])])
        assert tree.snc_status is SncStatus.UNVERIFIED
        assert snc_check(tree).status is SncStatus.UNVERIFIED

    def test_unknown_chart(self, cusp):
        """Test that a script step must name an existing chart."""
        with pytest.raises(CenterNotInChartError):
            resolve_scripted(cusp, [BlowupCenter.of("0.1", [0, 0])])

    def test_repeated_center(self, cusp):
        """Test that a point cannot be blown up twice."""
        with pytest.raises(CenterNotInChartError):
            resolve_scripted(cusp, [BlowupCenter.of("0", [0, 0]), BlowupCenter.of("0", [0, 0])])

    def test_extra_blowup_off_the_curve(self, cusp, cusp_tree):
        """Test an extra blow-up on E1 away from the strict transform."""
        tree = resolve_scripted(cusp, [*cusp_tree.centers(), BlowupCenter.of("0.2", [0, 0])])
        assert tree.m == (2, 3, 6, 2)
        assert tree.k == (1, 2, 4, 2)
        assert tree.snc_status is SncStatus.VERIFIED
        assert jacobian_discrepancies(tree) == tree.k
