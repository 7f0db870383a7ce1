"""Test-session plumbing: acceptance criterion reporting.

The acceptance tests record one PASS/FAIL line per criterion; the terminal
summary hook prints them after the run so the full criterion table is
visible in a default ``pytest`` invocation.
"""

ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
