import math

import pytest

from majorana1d.core import PhysicsParams


@pytest.fixture
def natural():
    """hbar = c = m = 1 on a ring/box of length 2 pi, slope k = 1."""
    return PhysicsParams(hbar=1.0, c=1.0, m=1.0, L=2.0 * math.pi, k=1.0)


@pytest.fixture
def general():
    """Non-unit constants, to catch misplaced factors of hbar, c or m."""
    return PhysicsParams(hbar=0.7, c=1.3, m=0.8, L=3.1, k=2.1)


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion."""
    def record(number: int, title: str, passed: bool, detail: str) -> None:
        status = "PASS" if passed else "FAIL"
        _ACCEPTANCE[number] = f"[{status}] criterion {number:2d}: {title} -- {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])
