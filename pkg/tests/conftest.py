"""Collects results of tests marked ``acceptance`` and prints one line per criterion."""

from collections import defaultdict

import pytest

_results = defaultdict(list)  # number -> [(title, clause, passed)]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    failed_early = report.when == "setup" and not report.passed
    if report.when == "call" or failed_early:
        number, title = marker.args
        _results[number].append((title, item.name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_results):
        entries = _results[number]
        title = entries[0][0]
        ok = all(passed for _, _, passed in entries)
        line = f"AC{number:<3d}{'PASS' if ok else 'FAIL'}  {title}"
        if not ok:
            bad = [name for _, name, passed in entries if not passed]
            line += f"  (failing: {', '.join(bad)})"
        tr.write_line(line)
