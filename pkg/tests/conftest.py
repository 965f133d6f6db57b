import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

GOLDEN = Path(__file__).parent / "golden"

# criterion number -> (title, [outcomes], [details])
_CRITERIA: dict[int, tuple[str, list[bool], list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        number, title = marker.args
        entry = _CRITERIA.setdefault(number, (title, [], []))
        entry[1].append(report.passed)
        entry[2].extend(str(v) for k, v in item.user_properties if k == "measured")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, results, details = _CRITERIA[number]
        verdict = "PASS" if results and all(results) else "FAIL"
        line = f"criterion {number}: {verdict}  {title}"
        if details:
            line += "  [" + "; ".join(details) + "]"
        terminalreporter.write_line(line)


@pytest.fixture
def golden():
    return GOLDEN
