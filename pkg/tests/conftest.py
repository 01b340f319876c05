import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

BUILTIN_SPECS = [
    "gen(2)",
    "gen(6)",
    "gen(3,5,7)",
    "coprime(6)",
    "and(coprime(4),coprime(9))",
    "full",
    "trivial",
    "powers(2)",
    "powers(3)",
    "sum2sq",
]

_CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary prints at the end of the run."""

    def record(label: str, ok: bool, detail: str = "") -> None:
        _CRITERIA.append((label, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {label} {detail}")
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label} {detail}")
