import re

import pytest

from etkk.blocks import canonical_circle, canonical_dimension_drop, make_finite_dim_block, make_interval_block
from etkk.kkcalc import diagram_validate


@pytest.fixture
def A_c():
    return make_interval_block((1, 1, 1, 1, 1), 3, (1, 1, 0, 0, 1), (0, 0, 1, 1, 1))


@pytest.fixture
def B_c():
    return make_interval_block((1, 1, 1, 1), 2, (1, 1, 0, 0), (0, 0, 1, 1))


@pytest.fixture
def lam(A_c, B_c):
    l0 = [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]
    return diagram_validate(A_c, B_c, l0, 1)


@pytest.fixture
def I2():
    return canonical_dimension_drop(2)


@pytest.fixture
def circle():
    return canonical_circle()


@pytest.fixture
def point():
    return make_finite_dim_block((1,))


# ---- acceptance summary ------------------------------------------------------

_CRITERIA = {}
_NAME = re.compile(r"test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    num = int(m.group(1))
    if report.when == "call" or report.failed:
        ok = report.passed and _CRITERIA.get(num, True)
        _CRITERIA[num] = ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if _CRITERIA[num] else 'FAIL'}")
