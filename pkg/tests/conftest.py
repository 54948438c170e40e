import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from helpers import ACCEPTANCE_LINES


@pytest.fixture
def acceptance_line():
    def record(number: int, passed: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
