import pytest

CRITERIA: dict[str, list[tuple[bool, str]]] = {}


def record(criterion: str, ok: bool, detail: str):
    CRITERIA.setdefault(criterion, []).append((ok, detail))
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture
def criterion():
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA, key=int):
        parts = CRITERIA[key]
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}")
