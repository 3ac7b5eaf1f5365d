from __future__ import annotations

import math

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def hbar0() -> float:
    return 1.0


@pytest.fixture(scope="session")
def h0() -> float:
    return 2 * math.pi


def pytest_terminal_summary(terminalreporter):
    from ._gate import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
