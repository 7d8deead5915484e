import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion."""

    def emit(number: int, name: str, ok: bool, detail: str):
        ACCEPTANCE_LINES[number] = f"[{'PASS' if ok else 'FAIL'}] {number:>2} {name}: {detail}"
        print(ACCEPTANCE_LINES[number])

    return emit


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
