import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record a one-line verdict for an acceptance criterion and return it."""
    def record(num: int, name: str, ok: bool, detail: str = "") -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {name}" + (f" | {detail}" if detail else "")
        _LINES[num] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(_LINES):
            terminalreporter.write_line(_LINES[num])
