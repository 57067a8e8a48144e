import numpy as np
import pytest

from grassmannian import AmbientManifold, TubularChart
from grassmannian.generators import circle, latitude


@pytest.fixture
def flat2():
    return AmbientManifold.flat(2)


@pytest.fixture
def sphere2():
    return AmbientManifold.sphere()


@pytest.fixture
def unit_circle(flat2):
    return circle(flat2, 128)


@pytest.fixture
def circle_chart(unit_circle):
    return TubularChart(unit_circle)


@pytest.fixture
def equator(sphere2):
    return latitude(sphere2, 96)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
