import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance-criterion line and fail the test if ``ok`` is false."""
    def _report(number, title, ok, detail=""):
        ACCEPTANCE_LINES.append((number, f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"))
        assert ok, f"criterion {number} failed: {detail}"
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
