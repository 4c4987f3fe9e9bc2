"""Shared pytest plumbing: the acceptance tests register one line per
criterion here so the summary is visible even with captured stdout."""

CRITERION_LINES = []


def record_criterion_line(line: str):
    CRITERION_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
