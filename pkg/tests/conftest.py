import numpy as np
import pytest

from chang_radon.geometry import Grid2D, build_geometry
from chang_radon.phantom import disk, make_phantom, random_phantom

RIM = 0.0375


@pytest.fixture(scope="session")
def small():
    """64^2 grid, 90 angles, 65 offsets on [-1.2, 1.2]^2."""
    grid = Grid2D.square(64, 1.2)
    return grid, build_geometry(grid, 90, 65, 1.2)


@pytest.fixture(scope="session")
def disk_field(small):
    return make_phantom(disk(1.0, 1.0, RIM), small[0])


@pytest.fixture(scope="session")
def random_field(small):
    return make_phantom(random_phantom(np.random.default_rng(7), width=0.1), small[0])


# acceptance lines collected for the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
