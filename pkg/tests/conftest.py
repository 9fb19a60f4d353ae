import numpy as np
import pytest

from phaselab import Formula, Graph


def gadget():
    """The four-clause unsatisfiable 3-bicycle on variables u1, u2, u3 (ids 0, 1, 2)."""
    return Formula.from_clauses(3, [
        [(0, True), (1, False)],
        [(1, True), (0, True)],
        [(0, False), (2, False)],
        [(2, True), (0, False)],
    ])


def cycle_graph(k, offset=0):
    return [(offset + i, offset + (i + 1) % k) for i in range(k)]


def theta(lengths):
    """Two hub vertices 0 and 1 joined by internally disjoint paths of the given lengths."""
    edges, nxt = [], 2
    for L in lengths:
        prev = 0
        for _ in range(L - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return Graph(nxt, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
