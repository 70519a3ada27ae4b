import datetime as dt
import time

import pytest

from alertscope.namespace.registry import TldRegistry
from alertscope.reference import demo_dir
from alertscope.webpki.testpki import make_ca

UTC = dt.timezone.utc
NOW = dt.datetime(2020, 3, 1, tzinfo=UTC)

# filled in by tests/test_acceptance.py, printed after the run
ACCEPTANCE_RESULTS: dict[int, tuple[str, bool, str]] = {}
SUITE_LIMIT_S = 60.0
_session = {}


@pytest.fixture(scope="session")
def registry():
    return TldRegistry.load()


@pytest.fixture(scope="session")
def demo():
    return demo_dir()


@pytest.fixture(scope="session")
def pki():
    root = make_ca("Fixture Root")
    inter = make_ca("Fixture Issuing CA", issuer=root)
    return root, inter


def pytest_sessionstart(session):
    _session["start"] = time.perf_counter()


def _check_suite_time():
    """Fold the suite wall time into criterion 8 once every test has run."""
    if 8 not in ACCEPTANCE_RESULTS or "elapsed" in _session:
        return
    elapsed = time.perf_counter() - _session["start"]
    _session["elapsed"] = elapsed
    title, ok, detail = ACCEPTANCE_RESULTS[8]
    detail = detail.split(";")[0] + f"; suite ran in {elapsed:.1f}s (limit {SUITE_LIMIT_S:.0f}s)"
    ACCEPTANCE_RESULTS[8] = (title, ok and elapsed < SUITE_LIMIT_S, detail)


def pytest_sessionfinish(session, exitstatus):
    _check_suite_time()
    if 8 in ACCEPTANCE_RESULTS and not ACCEPTANCE_RESULTS[8][1] and exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    _check_suite_time()
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, ok, detail = ACCEPTANCE_RESULTS[number]
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}"
        if detail:
            line += f": {detail}"
        terminalreporter.write_line(line)
