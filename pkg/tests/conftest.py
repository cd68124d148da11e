from pathlib import Path

import numpy as np
import pytest

from msgvm import Graph, parse_edge_list

DATA = Path(__file__).parent / "data"


def from_text(text, weighted=False):
    return parse_edge_list(text.splitlines(), weighted=weighted)


def from_pairs(n, pairs, weights=None):
    u, v = zip(*pairs) if pairs else ((), ())
    return Graph.from_edges(n, u, v, weights)


def random_graph(rng, n, p, weighted=False):
    """Erdos-Renyi G(n, p); optional integer weights in 1..4."""
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    u, v = iu[keep], iv[keep]
    w = rng.integers(1, 5, u.size).astype(float) if weighted else None
    return Graph.from_edges(n, u, v, w)


def er_corpus(count=200, seed=1234, max_n=12):
    """Random graphs with N <= max_n, p in {0.3, 0.6}; roughly a third weighted."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = int(rng.integers(2, max_n + 1))
        p = (0.3, 0.6)[k % 2]
        out.append(random_graph(rng, n, p, weighted=(k % 3 == 2)))
    return out


@pytest.fixture
def k3():
    return from_text("0 1\n0 2\n1 2\n")


@pytest.fixture
def p3():
    return from_text("0 1\n1 2\n")


@pytest.fixture
def two_triangles():
    """Triangles {0,1,2} and {3,4,5} joined by the edge (2,3)."""
    return from_pairs(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


@pytest.fixture(scope="session")
def karate():
    return parse_edge_list(open(DATA / "karate.txt"))


# acceptance criteria report: one line per criterion at the end of the run
_CRITERIA: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion")


@pytest.fixture
def criterion_detail(request):
    """Attach a measured-value string to the running criterion's report line."""
    marker = request.node.get_closest_marker("criterion")

    def record(text):
        _CRITERIA.setdefault(marker.args[0], {})["detail"] = text

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    entry = _CRITERIA.setdefault(marker.args[0], {})
    entry["title"] = marker.args[1]
    if rep.skipped:
        entry["status"] = "SKIP"
        entry.setdefault("detail", str(rep.longrepr[2]) if isinstance(rep.longrepr, tuple) else "")
    elif rep.failed:
        entry["status"] = "FAIL"
    elif rep.when == "call" and entry.get("status") != "FAIL":
        entry["status"] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: int(c.lstrip("AC"))):
        e = _CRITERIA[cid]
        line = f"{cid:>5} {e.get('status', '?'):4} {e.get('title', '')}"
        if e.get("detail"):
            line += f" | {e['detail']}"
        terminalreporter.write_line(line)
