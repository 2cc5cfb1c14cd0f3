import numpy as np
import pytest

from psne.graph import from_edges, load_edge_list, random_steps

# criterion number -> (title, outcome, detail), filled by acceptance tests
ACCEPTANCE = {}


@pytest.fixture
def p3():
    return load_edge_list("0 1\n1 2")


@pytest.fixture
def k3():
    return load_edge_list("0 1\n1 2\n0 2")


@pytest.fixture
def p4():
    return load_edge_list("0 1\n1 2\n2 3")


def fanout_graph():
    """Nine-node graph: v1 and v3 hang off v2, which fans out through
    v4..v6 to v7; v7 carries the leaves v8 and v9.  Node ids are 1..9."""
    e = np.array([(1, 2), (2, 3), (2, 4), (2, 5), (2, 6), (4, 7), (5, 7), (6, 7), (7, 8), (7, 9)]) - 1
    return from_edges(e[:, 0], e[:, 1], node_ids=np.arange(1, 10))


def random_connected_graph(n, p, rng, weighted=False):
    """Random spanning tree plus extra ER edges; always connected, no isolated nodes."""
    edges = {(int(rng.integers(i)), i) for i in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    e = np.array(sorted(edges))
    w = rng.uniform(0.5, 3.0, len(e)) if weighted else None
    return from_edges(e[:, 0], e[:, 1], w)


def simulate_ppr(g, alpha, source, walks, rng):
    """Stop frequencies of ``walks`` alpha-decay walks started at ``source``."""
    cur = np.full(walks, source)
    stopped = np.zeros(g.n, dtype=np.int64)
    alive = np.arange(walks)
    while alive.size:
        stop = rng.random(alive.size) < alpha
        np.add.at(stopped, cur[alive[stop]], 1)
        alive = alive[~stop]
        if alive.size:
            cur[alive], _ = random_steps(g, cur[alive], rng)
    return stopped / walks


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.fixture
def detail(request):
    """Collects a one-line measurement summary for an acceptance test."""
    parts = []
    yield parts
    marker = request.node.get_closest_marker("acceptance")
    if marker:
        num = marker.args[0]
        title, outcome, _ = ACCEPTANCE.get(num, (marker.args[1], "?", ""))
        ACCEPTANCE[num] = (title, outcome, "; ".join(parts))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and (rep.when == "call" or rep.failed):
        num, title = marker.args
        prev = ACCEPTANCE.get(num, (title, "PASS", ""))
        status = "PASS" if rep.passed and prev[1] != "FAIL" else "FAIL"
        ACCEPTANCE[num] = (title, status, prev[2])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, status, info = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d} {status}  {title}" + (f"  [{info}]" if info else ""))
