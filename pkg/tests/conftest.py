import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criterion")
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion number and title")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, {"title": title, "outcome": "PASS"})
    if call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception):
        entry["outcome"] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {entry['outcome']}  {entry['title']}")
