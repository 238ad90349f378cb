"""Shared fixtures and the acceptance summary hook."""

from __future__ import annotations

import pytest

# One line per acceptance criterion, collected as the tests run and replayed
# in a dedicated section at the end of the pytest report.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Append a pass/fail line for an acceptance criterion and assert it."""

    def _record(number: int, ok: bool, detail: str) -> None:
        line = f"[criterion {number}] {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
