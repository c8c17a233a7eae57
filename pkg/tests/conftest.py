from collections import defaultdict

import pytest

_criteria = {}
_outcomes = defaultdict(list)
_notes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    _criteria[number] = title
    if report.when == "call" or report.failed:
        _outcomes[number].append(report.passed)
    if report.when == "call":
        _notes[number].extend(v for k, v in item.user_properties if k == "note")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _outcomes[number]
        ok = bool(results) and all(results)
        line = f"[{'PASS' if ok else 'FAIL'}] {number}. {_criteria[number]}"
        if _notes[number]:
            line += " | " + "; ".join(_notes[number])
        terminalreporter.write_line(line)
