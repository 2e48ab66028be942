import pytest

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def record():
    """Print and collect one PASS/FAIL line for an acceptance criterion."""
    def _record(number: int, checks: dict):
        failed = [k for k, ok in checks.items() if not ok]
        line = f"criterion {number}: {'PASS' if not failed else 'FAIL'}"
        if failed:
            line += " (" + ", ".join(failed) + ")"
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert not failed, line
    return _record
