import re

import numpy as np
import pytest

from subgraph_sentinel.graph import Graph

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = {}
    for status, verdict in (("passed", "PASS"), ("failed", "FAIL"),
                            ("error", "FAIL"), ("skipped", "SKIP")):
        for rep in terminalreporter.stats.get(status, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if m and getattr(rep, "when", "call") in ("call", "setup"):
                num, name = int(m.group(1)), m.group(2)
                lines.setdefault(num, (name, verdict))
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for num in sorted(lines):
            name, verdict = lines[num]
            terminalreporter.write_line(
                f"  criterion {num:2d} {name}: {verdict}")


@pytest.fixture
def k4():
    return Graph.complete(4)


@pytest.fixture
def empty10():
    return Graph.empty(10)


def random_graph(rng, n, p):
    """Small test graph with independent edges, no production sampler involved."""
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    return Graph(n, edges)


@pytest.fixture
def graph_battery():
    """Seeded mixed-density graphs for brute-force comparisons."""
    rng = np.random.default_rng(987654321)
    out = []
    for _ in range(20):
        n = int(rng.integers(4, 13))
        p = float(rng.uniform(0.1, 0.8))
        out.append(random_graph(rng, n, p))
    return out
