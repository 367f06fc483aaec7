"""Shared fixtures and the acceptance-summary hook."""

import random

import pytest

from carnot_filiform import algebra_by_label

# one "criterion N: PASS/FAIL" line per acceptance check, printed after the
# run so they survive pytest's output capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def fr2():
    return algebra_by_label("fr2")


@pytest.fixture
def fr3():
    return algebra_by_label("fr3")


@pytest.fixture
def fr5():
    return algebra_by_label("fr5")


@pytest.fixture
def fc3():
    return algebra_by_label("fc3")


@pytest.fixture
def hc1():
    return algebra_by_label("hc1")


@pytest.fixture
def rng():
    return random.Random(20260822)
