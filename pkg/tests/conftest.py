import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import connected_atlas  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


@pytest.fixture(scope="session")
def atlas():
    return connected_atlas(6)


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES):
            terminalreporter.write_line(line)
