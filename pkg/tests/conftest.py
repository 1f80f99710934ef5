"""Collects acceptance pass/fail lines and prints them as a summary block."""

import pytest

acceptance_lines: list[str] = []


@pytest.fixture
def acceptance():
    """Recorder: logs one `<tag> PASS/FAIL <detail>` line, then asserts."""

    def report(tag: str, ok: bool, detail: str = "") -> None:
        line = f"{tag} {'PASS' if ok else 'FAIL'} {detail}".rstrip()
        acceptance_lines.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if not acceptance_lines:
        return
    terminalreporter.section("acceptance report")
    for line in acceptance_lines:
        terminalreporter.write_line(line)
