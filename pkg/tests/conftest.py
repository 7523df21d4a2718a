import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hexmob.hexgrid import build_grid  # noqa: E402


@pytest.fixture(scope="session")
def grid28():
    return build_grid(4, 7, 1.0, 2.0, 7)


@pytest.fixture(scope="session")
def grid15():
    return build_grid(15, 15, 1.0, 2.0, 7)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, detail in sorted(RESULTS, key=lambda r: int(r[0][1:])):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {crit}: {detail}")
