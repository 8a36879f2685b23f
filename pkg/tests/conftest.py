import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gcmates.graph import parse_graph6  # noqa: E402

EXAMPLE_G6 = "I?ABCt[Tw"
MATE_G6 = {"H1": "I?ABEdsuW", "H2": "I?`@E`xVg", "H3": "I?`@E`xnG"}

# reference adjacency matrix of the order-10 example graph
EXAMPLE_A = [
    [0, 0, 0, 0, 0, 1, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 1, 1],
    [0, 1, 1, 0, 0, 0, 0, 1, 0, 1],
    [1, 0, 0, 1, 1, 0, 1, 0, 0, 1],
    [0, 1, 0, 1, 1, 1, 0, 0, 0, 1],
    [0, 1, 0, 1, 0, 1, 1, 1, 1, 0],
]


@pytest.fixture(scope="session")
def example_graph():
    return parse_graph6(EXAMPLE_G6)


@pytest.fixture(scope="session")
def mates():
    return {k: parse_graph6(v) for k, v in MATE_G6.items()}


# ---- acceptance reporting: one PASS/FAIL line per criterion


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        number, title = marker.args
        item.config._criteria.append((number, title, status, report.duration))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not config._criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, duration in sorted(config._criteria):
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({duration:.2f}s)")
