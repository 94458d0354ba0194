"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

import re

_results = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2).replace("_", " "))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = _results.get(key, (True, 0.0))
        _results[key] = (prev[0] and report.passed, prev[1] + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    total = 0.0
    for (num, label), (ok, secs) in sorted(_results.items()):
        total += secs
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {label}  ({secs:.2f}s)")
    terminalreporter.write_line(f"acceptance total {total:.2f}s (budget 60s)")
