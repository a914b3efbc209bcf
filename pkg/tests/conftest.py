import pytest

from hlunfold import models, pnml

CRITERIA = {}  # number -> (title, outcome, detail)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = ""
        if report.skipped and isinstance(report.longrepr, tuple):
            detail = report.longrepr[2]
        prev = CRITERIA.get(n)
        state = "SKIP" if report.skipped else "PASS" if report.passed else "FAIL"
        if prev and prev[1] == "FAIL":
            state = "FAIL"
        CRITERIA[n] = (title, state, detail or (prev[2] if prev else ""))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, state, detail = CRITERIA[n]
        line = f"criterion {n}: {state}  {title}"
        if detail:
            line += f"  ({detail.removeprefix('Skipped: ')})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bundled():
    """Every bundled model, lowered once."""
    return {name: pnml.load(models.read(name)) for name in models.BUNDLED}
