from __future__ import annotations

from pathlib import Path

import pytest

from hnfilt.instances.filtvec import FiltVecCategory, FiltVecObject
from hnfilt.instances.phimod import PhiModCategory
from hnfilt.instances.quiver import QuiverCategory

FIXTURES = Path(__file__).parent / "fixtures"

# Lines printed by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def fv():
    return FiltVecCategory()


@pytest.fixture
def qv():
    return QuiverCategory()


@pytest.fixture
def pm():
    return PhiModCategory()


@pytest.fixture
def fixture_a():
    """GF(2)^2 with span(e1) in weight 1 and the rest in weight 0."""
    return FiltVecObject.from_steps(2, 2, 0, [[[1, 0], [0, 1]], [[1, 0]], []])


@pytest.fixture
def fixtures_dir():
    return FIXTURES
