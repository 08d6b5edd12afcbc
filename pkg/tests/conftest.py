import pytest

from locmech.graph import WeightedGraph


def graph(n, edges, weights=None, W=None):
    return WeightedGraph.from_edges(n, edges, weights, W)


def path(weights, W=None):
    n = len(weights)
    return graph(n, [(i, i + 1) for i in range(n - 1)], weights, W)


def cycle(weights, W=None):
    n = len(weights)
    return graph(n, sorted((min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)),
                 weights, W)


def star(center, leaves, W=None):
    k = len(leaves)
    return graph(k + 1, [(0, i) for i in range(1, k + 1)], [center, *leaves], W)


def triangle(weights, W=None):
    return graph(3, [(0, 1), (0, 2), (1, 2)], weights, W)


@pytest.fixture
def edge53():
    return graph(2, [(0, 1)], [5, 3], 5)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}")
