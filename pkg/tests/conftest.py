import pytest
from hypothesis import HealthCheck, settings

from plquot.plcore import GeometricTail, validate

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def geo():
    """Slope 1 on [0,1], then base 2 with slopes 1/2 on [1,3/2], 3/2 on [3/2,2]."""
    from fractions import Fraction as F

    return validate([(1, 1)], GeometricTail(2, ((F(3, 2), F(1, 2)), (2, F(3, 2)))))
