import functools
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

from trigonal_sigma.curve import build_curve  # noqa: E402
from trigonal_sigma.periods import period_matrices  # noqa: E402
from trigonal_sigma.sigma import build_sigma  # noqa: E402

CURVES = {
    "e": (0, 2, [0, 1]),
    "345": (1, 2, [0, 1, -1.3 + 0.4j]),
    "345b": (1, 2, [0.5, 2, 1j]),
    "047": (0, 4, [0, 1, -1.3 + 0.4j, 0.7j]),
    "378": (2, 3, [0, 1, -1.3 + 0.4j, 0.7j, 2]),
}


# acceptance criterion number -> one PASS/FAIL line
RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])


@functools.lru_cache(maxsize=None)
def pipeline(name):
    r, s, b = CURVES[name]
    curve = build_curve(r, s, b)
    pd = period_matrices(curve)
    ev = build_sigma(curve, pd)
    return curve, pd, ev


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def genus1():
    return pipeline("e")


@pytest.fixture(scope="session")
def c345():
    return pipeline("345")


@pytest.fixture(scope="session")
def c047():
    return pipeline("047")


@pytest.fixture(scope="session")
def c378():
    return pipeline("378")
