import math

import pytest
from hypothesis import strategies as st

from polytree.geometry import Similarity
from polytree.system import load_fixture

SQRT2 = math.sqrt(2)


@pytest.fixture(scope="session")
def ex22():
    return load_fixture("ex22")


@pytest.fixture(scope="session")
def ex22_variant():
    return load_fixture("ex22_variant")


@pytest.fixture(scope="session")
def hata():
    return load_fixture("hata")


@pytest.fixture(scope="session")
def ex24():
    return load_fixture("ex24")


@pytest.fixture(scope="session")
def zipper():
    return load_fixture("zipper")


coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
points = st.builds(complex, coords, coords)


@st.composite
def similarities(draw, max_ratio: float = 0.95):
    r = draw(st.floats(0.05, max_ratio))
    phase = draw(st.floats(-math.pi, math.pi))
    b = draw(points)
    return Similarity(r * complex(math.cos(phase), math.sin(phase)), b, draw(st.booleans()))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
