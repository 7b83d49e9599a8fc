import re

import pytest

from weakconley.fixtures import (
    EXAMPLE1_N,
    EXAMPLE1_S,
    EXAMPLE2_N,
    EXAMPLE2_S,
    doubling_map,
    doubling_samples,
    example_set,
)


@pytest.fixture(scope="session")
def dmap():
    return doubling_map()


@pytest.fixture(scope="session")
def dsamples():
    return doubling_samples()


@pytest.fixture(scope="session")
def ex1(dmap):
    return example_set(dmap.grid, EXAMPLE1_N), example_set(dmap.grid, EXAMPLE1_S)


@pytest.fixture(scope="session")
def ex2(dmap):
    return example_set(dmap.grid, EXAMPLE2_N), example_set(dmap.grid, EXAMPLE2_S)


# -- one pass/fail line per acceptance criterion ------------------------------

_CRITERIA = {}
_NAME = re.compile(r"test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = _NAME.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        ok = report.outcome == "passed"
        _CRITERIA[n] = _CRITERIA.get(n, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    from test_acceptance import CRITERIA  # noqa: PLC0415 - only when the file ran

    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status = "PASS" if _CRITERIA[n] else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {CRITERIA.get(n, '')}")
