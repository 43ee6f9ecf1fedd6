import numpy as np
import pytest

from connectit.driver import bfs_oracle
from connectit.graph import EdgeList, symmetrize
from connectit.verify import counter_example_graph

# lines appended by tests/test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def graph_from_pairs(pairs, n):
    if not pairs:
        return symmetrize((np.empty(0, np.int64), np.empty(0, np.int64)), n)
    return symmetrize(EdgeList.from_pairs(pairs, n=n), n)


@pytest.fixture
def cex_graph():
    return counter_example_graph()


@pytest.fixture
def oracle():
    return bfs_oracle
