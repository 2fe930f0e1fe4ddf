import sys
from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parents[1] / "src" / "qpsurf" / "data"


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
