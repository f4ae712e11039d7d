"""Prints one pass/fail line per acceptance criterion at session end."""

import pytest

_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or "test_acceptance" not in item.nodeid:
        return
    name = item.name
    if name.startswith("test_p") or name.startswith("test_s"):
        crit = name.split("_")[1].upper()
        label = " ".join(name.split("_")[2:])
        prev = _results.get(crit)
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        if prev is None or status == "FAIL" or (status == "SKIP" and prev[0] == "PASS"):
            _results[crit] = (status, label)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for crit in sorted(_results, key=lambda c: (len(c), c)):
        status, label = _results[crit]
        terminalreporter.write_line(f"{crit:4s} {label:<58s} {status}")
