import pytest

from fwtsp import example1
from fwtsp.perm import Permutation


@pytest.fixture
def m():
    return example1.matrix()


@pytest.fixture
def d3():
    return Permutation.from_row([4, 3, 1, 2, 7, 5, 8, 6])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
