"""Shared fixtures: the two small reference problems shipped under fixtures/."""

from pathlib import Path

import pytest

from wl1min import read_matrix, read_vector

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

# Acceptance tests append their verdict lines here; the terminal-summary hook
# below prints them after the run, where output capture no longer hides them.
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance scorecard")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ex1_phi():
    return read_matrix(FIXTURES / "example1_phi.txt")


@pytest.fixture(scope="session")
def ex1_b():
    return read_vector(FIXTURES / "example1_b.txt")


@pytest.fixture(scope="session")
def ex2_phi():
    return read_matrix(FIXTURES / "example2_phi.txt")


@pytest.fixture(scope="session")
def ex2_b():
    return read_vector(FIXTURES / "example2_b.txt")


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
