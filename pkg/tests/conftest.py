import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fselect.engine import EngineConfig, ParallelEngine  # noqa: E402


@pytest.fixture
def engine():
    with ParallelEngine(EngineConfig(workers=1)) as eng:
        yield eng


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_RESULTS: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    number, title = marker.args
    status, note = report.outcome.upper(), ""
    if report.skipped:
        status, note = "SKIP", str(report.longrepr[-1]) if isinstance(report.longrepr, tuple) else ""
    ACCEPTANCE_RESULTS[number] = (title, "PASS" if status == "PASSED" else status.replace("FAILED", "FAIL"), note)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, status, note = ACCEPTANCE_RESULTS[number]
        line = f"{status:<4}  {number:>2}. {title}"
        terminalreporter.write_line(line + (f"  [{note}]" if note else ""))
