from __future__ import annotations

import random
import time
from functools import lru_cache

import pytest

from drdomination.generators import complete, complete_bipartite, connected_gnp, cycle, path, star

CORPUS_SEED = 20241016
RANDOM_GRAPHS = 500

_criteria: dict[str, str] = {}
_details: dict[str, list[str]] = {}
_session_start = time.perf_counter()
SUITE_LIMIT_S = 600


@lru_cache(maxsize=None)
def corpus() -> tuple:
    """Seeded connected G(n, p) graphs with n <= 12 plus the small named families up to n = 10."""
    rng = random.Random(CORPUS_SEED)
    graphs = []
    for i in range(RANDOM_GRAPHS):
        n = rng.randint(2, 12)
        p = rng.uniform(0.25, 0.8)
        graphs.append((f"gnp#{i}", connected_gnp(n, p, rng)))
    for n in range(1, 11):
        graphs.append((f"path{n}", path(n)))
        graphs.append((f"complete{n}", complete(n)))
    for n in range(3, 11):
        graphs.append((f"cycle{n}", cycle(n)))
    for leaves in range(1, 10):
        graphs.append((f"star{leaves}", star(leaves)))
    for a in range(1, 10):
        for b in range(a, 11 - a):
            graphs.append((f"K{a},{b}", complete_bipartite(a, b)))
    return tuple(graphs)


@pytest.fixture(scope="session")
def graph_corpus():
    return corpus()


@pytest.fixture
def criterion(request):
    """Attach free-form lines to the acceptance summary for the running test."""
    lines = _details.setdefault(request.node.nodeid, [])
    return lines.append


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[report.nodeid] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _criteria.items():
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{outcome}  {name}")
        for line in _details.get(nodeid, []):
            terminalreporter.write_line(f"      {line}")
    elapsed = time.perf_counter() - _session_start
    verdict = "PASS" if elapsed < SUITE_LIMIT_S else "FAIL"
    terminalreporter.write_line(f"{verdict}  session runtime {elapsed:.0f} s (criterion 1 limit {SUITE_LIMIT_S} s)")
