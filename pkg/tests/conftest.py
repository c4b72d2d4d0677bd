import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


def record_line(number: int, title: str, ok: bool, detail: str) -> str:
    line = f"criterion {number:2d}  {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return line


@pytest.fixture
def acceptance():
    return record_line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
