import math
import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from hardscatter.geometry import ConvexBody2D  # noqa: E402

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def make_bodies():
    return {
        "disk": ConvexBody2D.disk(0.5),
        "squareish": ConvexBody2D.support_fourier([1, 0, 0, 0, 0.05]),
        "eccentric": ConvexBody2D.support_fourier([1, 0, 0.15], [0, 0, 0.03]),
        "oval": ConvexBody2D.support_fourier([1, 0, 0.1]),
    }


BODIES = make_bodies()
SMOOTH = ["disk", "squareish", "eccentric", "oval"]
NONCIRCULAR = ["squareish", "eccentric", "oval"]
UNIT_SQUARE = [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]


@pytest.fixture(scope="session")
def bodies():
    return BODIES


@pytest.fixture(scope="session")
def square():
    return ConvexBody2D.polygon(UNIT_SQUARE)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_betas(rng, n):
    return rng.uniform(0, 2 * math.pi, size=(n, 3))


ACCEPTANCE_LINES = []


def record_criterion(label, passed, detail):
    line = f"{label:<5} {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
