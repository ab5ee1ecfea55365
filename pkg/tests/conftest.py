"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

from __future__ import annotations

import pytest

_CRITERIA: dict[str, str] = {}
_OUTCOMES: dict[str, list[tuple[str, bool]]] = {}
_BY_NODE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is None:
            continue
        number, title = mark.args
        _CRITERIA[str(number)] = title
        label = item.callspec.id if hasattr(item, "callspec") else item.name
        _BY_NODE[item.nodeid] = (str(number), label)


def pytest_runtest_logreport(report):
    if report.nodeid not in _BY_NODE:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number, label = _BY_NODE[report.nodeid]
        _OUTCOMES.setdefault(number, []).append((label, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES, key=int):
        results = _OUTCOMES[number]
        failed = [label for label, ok in results if not ok]
        status = "FAIL" if failed else "PASS"
        line = f"{status}  criterion {number}: {_CRITERIA[number]} ({len(results) - len(failed)}/{len(results)} checks)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
