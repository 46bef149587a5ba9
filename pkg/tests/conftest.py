"""Shared fixtures, including the acceptance criterion reporter."""

import pytest

_criterion_lines = []


@pytest.fixture
def criterion():
    """Record a one-line PASS/FAIL verdict shown in the terminal summary."""

    def _record(line: str) -> None:
        _criterion_lines.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus):
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _criterion_lines:
        terminalreporter.write_line(line)
