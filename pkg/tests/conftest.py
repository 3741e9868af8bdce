"""Shared fixtures and the acceptance-criteria summary printed after the run."""

from collections import defaultdict

import pytest

_CRITERIA = defaultdict(list)
_TITLES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    _TITLES[number] = title
    if report.when == "call" or (report.when == "setup" and not report.passed):
        passed = report.passed and not hasattr(report, "wasxfail")
        detail = ""
        for key, value in item.user_properties:
            if key == "detail":
                detail = value
        _CRITERIA[number].append((item.name, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        checks = _CRITERIA[number]
        ok = all(p for _, p, _ in checks)
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {_TITLES[number]}")
        for name, passed, detail in checks:
            suffix = f"  [{detail}]" if detail else ""
            terminalreporter.write_line(f"    {'pass' if passed else 'FAIL'} {name}{suffix}")


@pytest.fixture
def detail(record_property):
    """Attach a short human-readable result to the acceptance summary."""

    def _record(text):
        record_property("detail", text)

    return _record
