import contextlib

import pytest

_CRITERIA: list[tuple[str, bool, str]] = []


class _Criterion:
    def __init__(self, name):
        self.name = name
        self.detail = ""


@pytest.fixture
def criterion():
    """``with criterion("name") as c:`` records one PASS/FAIL line for the run summary."""

    @contextlib.contextmanager
    def record(name):
        c = _Criterion(name)
        try:
            yield c
        except BaseException as exc:
            _CRITERIA.append((name, False, c.detail or f"{type(exc).__name__}: {exc}"))
            raise
        _CRITERIA.append((name, True, c.detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
