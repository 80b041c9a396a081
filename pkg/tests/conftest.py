import numpy as np
import pytest

from hbdiff.hbgraph import HbEdge, HbGraph
from hbdiff.mset import Multiset

ACCEPTANCE = pytest.StashKey[list]()


def make_g1():
    return HbGraph(
        ["v1", "v2", "v3"],
        [HbEdge("e1", Multiset({"v1": 2, "v2": 1})), HbEdge("e2", Multiset({"v2": 1, "v3": 1}))],
    )


def make_g2():
    return HbGraph(
        ["v1", "v2", "v3"],
        [HbEdge("e1", Multiset({"v1": 2, "v2": 1}), 2.0), HbEdge("e2", Multiset({"v2": 1, "v3": 1}), 1.0)],
    )


def random_hbgraph(rng, n_max=50, p_max=30, weighted=True, isolated=False, integer=False):
    """Random hb-graph; every vertex is covered unless ``isolated`` is set."""
    n = int(rng.integers(2, n_max + 1))
    p = int(rng.integers(1, p_max + 1))
    vertices = [f"v{i}" for i in range(n)]
    edges = []
    for j in range(p):
        size = int(rng.integers(1, min(n, 8) + 1))
        members = rng.choice(n, size, replace=False)
        if integer:
            mults = rng.integers(1, 4, size=size)
        else:
            mults = rng.uniform(0.1, 3.0, size=size)
        ms = {vertices[i]: (int(m) if integer else float(m)) for i, m in zip(members, mults)}
        w = float(rng.uniform(0.2, 3.0)) if weighted else 1.0
        edges.append(HbEdge(f"e{j}", Multiset(ms), w))
    if not isolated:
        covered = {v for e in edges for v in e.members}
        missing = [v for v in vertices if v not in covered]
        for k, v in enumerate(missing):
            edges.append(HbEdge(f"f{k}", Multiset({v: 1.0, vertices[0]: 1.0} if v != vertices[0] else {v: 1.0}),
                                float(rng.uniform(0.2, 3.0)) if weighted else 1.0))
    return HbGraph(vertices, edges)


@pytest.fixture
def g1():
    return make_g1()


@pytest.fixture
def g2():
    return make_g2()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        lines.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    lines = terminalreporter.config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
