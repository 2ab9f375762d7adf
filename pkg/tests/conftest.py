import pytest

_LOG = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """``report(label, ok, detail)`` records one PASS/FAIL line and asserts ``ok``."""
    lines = request.config.stash.setdefault(_LOG, [])

    def _report(label: str, ok: bool, detail: str = ""):
        line = f"{label}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
        lines.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LOG, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
