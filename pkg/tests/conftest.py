import pytest

_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record an acceptance-criterion outcome for the end-of-run summary.

    Returns a callable taking (name, passed, detail); tests still assert on
    their own so failures show up normally — the summary is for one-line
    pass/fail visibility per criterion.
    """

    def record(name: str, passed: bool, detail: str) -> bool:
        _RESULTS.append((name, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
