import pytest

from qmaxsat.formula import Clause, Formula, parse_dimacs

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def two_clause():
    """(x0 | x1 | x2) & (~x0 | ~x1 | ~x2)."""
    return parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0")


@pytest.fixture
def four_clause():
    """n=3, m=4 instance satisfied by exactly 001, 011, 101, 110 (x0 x1 x2)."""
    return parse_dimacs("p cnf 3 4\n-1 -2 -3 0\n-1 2 3 0\n1 -2 3 0\n1 2 3 0")


@pytest.fixture
def gt_example():
    """n=4, m=3 instance used to illustrate the GT4 clause layer."""
    return Formula(4, (Clause.of(1, -2, -3), Clause.of(-1, 2, -4), Clause.of(1, 3, -4)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
