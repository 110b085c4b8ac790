import math

import pytest

from aeq.core import PointSet

_ACCEPTANCE_LINES = []


@pytest.fixture
def record_acceptance():
    def record(number, passed, detail):
        status = "PASS" if passed else "FAIL"
        _ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def square():
    return PointSet([[0, 0], [1, 0], [1, 1], [0, 1]])


@pytest.fixture
def triangle():
    return PointSet([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])


@pytest.fixture
def collinear_024():
    return PointSet([[0.0], [2.0], [4.0]])
