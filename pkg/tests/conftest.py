import pytest

_RESULTS = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(k, ok, detail)``."""
    table = request.config.stash.setdefault(_RESULTS, {})

    def record(k, ok, detail):
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        table[k] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    table = config.stash.get(_RESULTS, None)
    if table:
        terminalreporter.section("acceptance criteria")
        for k in sorted(table):
            terminalreporter.write_line(table[k])
