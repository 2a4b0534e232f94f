from fractions import Fraction

import pytest

from cyclerep.dynamics import Section, find_cycle, radial_cubic_field
from cyclerep.polynomials import chebyshev
from cyclerep.pullback import build_pullback


@pytest.fixture(scope="session")
def radial_half():
    """The one-cycle cubic seed with cycle radius 1/2."""
    return radial_cubic_field(Fraction(1, 2))


@pytest.fixture(scope="session")
def x_axis_section():
    return Section(base=(0.0, 0.0), direction=(1.0, 0.0), s_max=1.0)


@pytest.fixture(scope="session")
def base_cycle(radial_half, x_axis_section):
    rec = find_cycle(radial_half, x_axis_section, 0.5)
    assert rec.certified
    return rec


@pytest.fixture(scope="session")
def pullback_m3(radial_half):
    return build_pullback(radial_half, chebyshev(3))
