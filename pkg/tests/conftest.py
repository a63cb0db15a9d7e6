"""Shared fixtures and the acceptance-criteria report hook."""

import numpy as np
import pytest

from zetamax.arithmetic import build_tables
from zetamax.coefficients import build_c_table, build_alpha_set
from zetamax.hardy import find_zeros


@pytest.fixture(scope="session")
def c_table():
    return build_c_table(K_max=60, L_max=25)


@pytest.fixture(scope="session")
def alpha_set(c_table):
    return build_alpha_set(c_table, N_max=20)


@pytest.fixture(scope="session")
def arith_tables():
    return build_tables(100_000, 4)


@pytest.fixture(scope="session")
def zeros_to_2000():
    return find_zeros(14.0, 2000.0)


ACCEPTANCE_LINES = []


def record_acceptance(number: int, ok: bool, description: str, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    line = "ACCEPTANCE %d: %s - %s" % (number, status, description)
    if detail:
        line += " (%s)" % detail
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
