import pytest

CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line, then assert it."""

    def check(number, label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {label}"
        if detail:
            line += f" ({detail})"
        CRITERIA.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
