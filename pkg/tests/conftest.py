import pytest
from hypothesis import settings

from simfix import similarity as sim
from simfix.geom_core import Point

# fixed example streams keep the suite reproducible run to run
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


@pytest.fixture
def alpha_star():
    """Direct reference map: scale 2, angle 90, translation (4, 0)."""
    return sim.Similarity("direct", 2.0, 90.0, (4.0, 0.0))


@pytest.fixture
def beta_star():
    """Indirect reference map (x, y) -> (2x + 3, -2y)."""
    return sim.Similarity("indirect", 2.0, 0.0, (3.0, 0.0))


@pytest.fixture
def delta():
    return sim.stretch(Point(2.0, 3.0), 3.0)
