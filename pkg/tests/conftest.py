import pytest

_LINES: list[str] = []


@pytest.fixture(scope="session")
def verdict():
    """Record one acceptance line; returns ``ok`` so tests can assert on it."""

    def record(criterion: str, name: str, ok, detail: str = "") -> bool:
        tag = "REPORT" if ok is None else ("PASS" if ok else "FAIL")
        line = f"{tag} [{criterion}] {name}" + (f": {detail}" if detail else "")
        _LINES.append(line)
        print(line)
        return ok is not False

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
