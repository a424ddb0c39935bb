import numpy as np
import pytest

from thinrig.graph import Graph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def gnp(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    i, j = np.triu_indices(n, 1)
    keep = rng.random(len(i)) < p
    return Graph(n, np.column_stack((i[keep], j[keep])))


@pytest.fixture
def k4():
    return Graph.complete(4)


@pytest.fixture
def path4():
    return Graph(4, [(0, 1), (1, 2), (2, 3)])
