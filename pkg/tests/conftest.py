import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def record_criterion(request):
    """Store ``(label, passed, detail)`` for the end-of-run acceptance report."""
    results = request.config.stash[_RESULTS]

    def record(label, passed, detail):
        results[label] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(results, key=lambda s: (int(s.split(".")[0].rstrip("abc")), s)):
        passed, detail = results[label]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label:<4} {detail}")
