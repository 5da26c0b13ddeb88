import pytest

_CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(label, passed, detail)."""

    def record(label: str, passed: bool, detail: str = "") -> bool:
        prev = _CRITERIA.get(label)
        ok = bool(passed) and (prev is None or prev[0])
        details = "; ".join(d for d in ((prev[1] if prev else ""), detail) if d)
        _CRITERIA[label] = (ok, details)
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA):
        ok, detail = _CRITERIA[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
