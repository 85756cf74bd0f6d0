import time

import pytest

from isoheat.sturm.flows import xi_flow

# one line per acceptance criterion, filled in by test_acceptance.py
CRITERIA: dict[int, tuple[bool, str]] = {}
# wall-clock seconds spent building shared fixtures
BUILD_SECONDS: dict[str, float] = {}


@pytest.fixture(scope="session")
def xi_2_3():
    """The n=2 xi flow integrated to s=3 (shared: it takes ~15 s)."""
    start = time.perf_counter()
    st = xi_flow(2, 3.0)
    BUILD_SECONDS["xi_2_3"] = time.perf_counter() - start
    return st


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
