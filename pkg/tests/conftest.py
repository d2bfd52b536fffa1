"""
Shared fixtures: the resolved example hypersurfaces.
"""

import pytest

from adjlab.core.blowup import BlowupCenter
from adjlab.core.poly import parse_poly
from adjlab.core.resolution import resolve_plane_curve, resolve_scripted

PLANE = ("z1", "z2")
SPACE = ("x", "y", "z")


@pytest.fixture(scope="session")
def cusp():
    """The cusp z1^3 - z2^2."""
    return parse_poly("z1^3 - z2^2", PLANE)


@pytest.fixture(scope="session")
def cusp_tree(cusp):
    """Automatic resolution of the cusp (three blow-ups)."""
    return resolve_plane_curve(cusp)


@pytest.fixture(scope="session")
def node_tree():
    """Automatic resolution of the node z1*z2 (one blow-up)."""
    return resolve_plane_curve(parse_poly("z1*z2", PLANE))


@pytest.fixture(scope="session")
def smooth_tree():
    """The smooth line z1 = 0 blown up once at the origin."""
    return resolve_scripted(parse_poly("z1", PLANE), [BlowupCenter.of("0", [0, 0])])


@pytest.fixture(scope="session")
def cone():
    """The quadric cone z^2 - x*y."""
    return parse_poly("z^2 - x*y", SPACE)


@pytest.fixture(scope="session")
def cone_tree(cone):
    """The cone blown up once at the origin, normal crossings asserted."""
    return resolve_scripted(cone, [BlowupCenter.of("0", [0, 0, 0])], snc_assertion=True)


@pytest.fixture(scope="session")
def cusp_extra_tree(cusp, cusp_tree):
    """The cusp resolution followed by one more blow-up away from the curve."""
    return resolve_scripted(cusp, [*cusp_tree.centers(), BlowupCenter.of("0.2", [0, 0])])
