"""Shared pytest wiring: collects acceptance-criterion verdict lines.

The acceptance tests print one PASS/FAIL line per criterion as they run
(visible with ``-s``) and also register the lines here so the summary
block appears at the end of every run, captured or not.
"""
from __future__ import annotations

ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
