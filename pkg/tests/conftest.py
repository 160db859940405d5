import time

import pytest

CRITERIA = {
    1: "operadic relations of grafting",
    2: "shift and deshift are inverse",
    3: "associahedron face counts",
    4: "length calculus",
    5: "sigma family",
    6: "gamma family",
    7: "lambda family",
    8: "star-composition calculus",
    9: "bar rewriting",
    10: "usual map and A-infinity map relations",
    11: "the contraction alpha_P",
    12: "equivariance of the cone embedding",
    13: "interval operad and its step-path algebra",
    14: "theta comparison map",
    15: "command line determinism and shrinking",
}

_results: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if hasattr(report, "wasxfail"):
            status = "xfail"
        else:
            status = report.outcome
        _results.setdefault(n, []).append((item.name, status, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        rows = _results.get(n)
        if not rows:
            continue
        bad = [name for name, status, _ in rows if status != "passed"]
        seconds = sum(d for _, _, d in rows)
        verdict = "PASS" if not bad else "FAIL"
        line = f"criterion {n:2d}: {verdict}  {CRITERIA[n]}  ({len(rows)} checks, {seconds:.2f}s)"
        if bad:
            line += "  failing: " + ", ".join(bad)
        tr.write_line(line)


@pytest.fixture
def timer():
    start = time.perf_counter()
    yield lambda: time.perf_counter() - start
