"""Shared pytest wiring.

Acceptance tests append their one-line verdicts here; the terminal
summary hook replays them after capture ends so the report shows up
in default (captured) runs, not only under -s.
"""

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance report")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
