"""
Tests for the residue adjunction map and its checks.
"""

import numpy as np
import pytest

from adjlab.core.adjunction import (
    MeromorphicTopForm,
    ResidueForm,
    adjunction_map,
    differential,
    evaluate_residue,
    l2_criterion,
    mu_consistency_check,
    residue_identity_check,
    sample_regular_points,
    tangent_frames,
    wedge,
)
from adjlab.core.poly import evaluate_many, parse_poly, partial_derivative
from adjlab.utils.exceptions import (
    ArityMismatchError,
    FormMismatchError,
    SamplingError,
    VariableMismatchError,
    ZeroPartialDerivativeError,
    ZeroPolynomialError,
)

PLANE = ("z1", "z2")
SPACE = ("x", "y", "z")


def p(text: str, variables=PLANE):
    return parse_poly(text, variables)


class TestAdjunctionMap:
    """Test cases for adjunction_map and the exact identity."""

    def test_cusp_residue(self, cusp):
        """Test the residue of dz1 ^ dz2 / f omitting dz2."""
        residue = adjunction_map(MeromorphicTopForm(p("1"), cusp), 2)
        assert residue.sign == -1
        assert residue.numerator == p("1")
        assert residue.denominator == p("-2*z2")
        assert residue.omitted == (0,)

    def test_sign_alternates(self, cone):
        """Test the sign (-1)^(mu-1)."""
        omega = MeromorphicTopForm(parse_poly("1", SPACE), cone)
        assert [adjunction_map(omega, mu).sign for mu in (1, 2, 3)] == [1, -1, 1]

    @pytest.mark.parametrize("g", ["1", "z1", "z2", "z1^2 - 3*z2"])
    @pytest.mark.parametrize("mu", [1, 2])
    def test_identity_holds_on_cusp(self, cusp, g, mu):
        """Test df ^ residue = (df/dz_mu) g dz for every omitted index."""
        omega = MeromorphicTopForm(p(g), cusp)
        assert residue_identity_check(omega, adjunction_map(omega, mu))

    @pytest.mark.parametrize("mu", [1, 2, 3])
    def test_identity_holds_on_cone(self, cone, mu):
        """Test the identity in three variables."""
        omega = MeromorphicTopForm(parse_poly("x + z", SPACE), cone)
        assert residue_identity_check(omega, adjunction_map(omega, mu))

    def test_identity_detects_wrong_sign(self, cusp):
        """Test that a tampered residue fails the identity."""
        omega = MeromorphicTopForm(p("z1"), cusp)
        residue = adjunction_map(omega, 2)
        tampered = ResidueForm(sign=-residue.sign, mu=2, numerator=residue.numerator, denominator=residue.denominator)
        assert not residue_identity_check(omega, tampered)

    def test_zero_partial(self):
        """Test that the omitted index needs a nonzero partial."""
        with pytest.raises(ZeroPartialDerivativeError):
            adjunction_map(MeromorphicTopForm(p("1"), p("z1")), 2)

    def test_index_out_of_range(self, cusp):
        """Test mu outside 1..n."""
        with pytest.raises(ArityMismatchError):
            adjunction_map(MeromorphicTopForm(p("1"), cusp), 3)

    def test_form_validation(self, cusp):
        """Test the denominator and variables of a top form."""
        with pytest.raises(ZeroPolynomialError):
            MeromorphicTopForm(p("1"), p("0"))
        with pytest.raises(VariableMismatchError):
            MeromorphicTopForm(parse_poly("1", SPACE), cusp)


class TestForms:
    """Test cases for wedge and differential."""

    def test_differential(self, cusp):
        """Test df of the cusp."""
        assert differential(cusp) == {(0,): p("3*z1^2"), (1,): p("-2*z2")}

    def test_wedge_is_alternating(self):
        """Test dz2 ^ dz1 = -dz1 ^ dz2 and dz1 ^ dz1 = 0."""
        one = p("1")
        assert wedge({(1,): one}, {(0,): one}) == {(0, 1): -one}
        assert wedge({(0,): one}, {(0,): one}) == {}


class TestNumericalChecks:
    """Test cases for sampling, tangent frames and index consistency."""

    def test_points_lie_on_v(self, cusp):
        """Test that sampled points satisfy f = 0."""
        points = sample_regular_points(cusp, 20, seed=3)
        assert points.shape == (20, 2)
        values = np.abs(evaluate_many(cusp, points))
        scale = 1 + np.abs(points).max(axis=1) ** 3
        assert np.all(values / scale < 1e-9)

    def test_sampling_is_seeded(self, cone):
        """Test that a seed fixes the sample."""
        assert np.array_equal(sample_regular_points(cone, 5, seed=7), sample_regular_points(cone, 5, seed=7))

    def test_sampling_failure(self, cusp):
        """Test the error when no point passes the filter."""
        with pytest.raises(SamplingError):
            sample_regular_points(cusp, 3, nonvanishing=(p("0"),), max_attempts=10)

    def test_tangent_frames_annihilate_df(self, cone):
        """Test that frame vectors lie in the kernel of df."""
        points = sample_regular_points(cone, 10, seed=1)
        frames = tangent_frames(cone, points)
        assert frames.shape == (10, 2, 3)
        gradients = np.stack([evaluate_many(partial_derivative(cone, i), points) for i in range(3)], axis=1)
        contraction = np.einsum("ni,nki->nk", gradients, frames)
        assert np.max(np.abs(contraction)) < 1e-9

    def test_residue_values_finite(self, cusp):
        """Test evaluation of a residue on its frames."""
        omega = MeromorphicTopForm(p("z1"), cusp)
        points = sample_regular_points(cusp, 8, seed=5)
        values = evaluate_residue(adjunction_map(omega, 1), points, tangent_frames(cusp, points))
        assert np.all(np.isfinite(values))

    @pytest.mark.parametrize("g", ["1", "z1", "z2"])
    def test_cusp_index_independence(self, cusp, g):
        """Test that both residues agree on V."""
        omega = MeromorphicTopForm(p(g), cusp)
        assert mu_consistency_check(omega, 1, 2, samples=50, seed=11) < 1e-8

    @pytest.mark.parametrize("pair", [(1, 2), (1, 3), (2, 3)])
    def test_cone_index_independence(self, cone, pair):
        """Test all index pairs on the cone."""
        omega = MeromorphicTopForm(parse_poly("1", SPACE), cone)
        assert mu_consistency_check(omega, *pair, samples=50, seed=13) < 1e-8


class TestL2Criterion:
    """Test cases for the exact square-integrability criterion."""

    def test_cusp(self, cusp, cusp_tree):
        """Test that g dz / f has L2 residue exactly for g in (z1, z2)."""
        assert not l2_criterion(MeromorphicTopForm(p("1"), cusp), cusp_tree)
        assert l2_criterion(MeromorphicTopForm(p("z1"), cusp), cusp_tree)
        assert l2_criterion(MeromorphicTopForm(p("z2"), cusp), cusp_tree)

    def test_cone(self, cone, cone_tree):
        """Test that every residue on the cone is L2."""
        assert l2_criterion(MeromorphicTopForm(parse_poly("1", SPACE), cone), cone_tree)

    def test_mismatched_tree(self, cusp_tree):
        """Test that form and tree must share f."""
        with pytest.raises(FormMismatchError):
            l2_criterion(MeromorphicTopForm(p("1"), p("z1*z2")), cusp_tree)
