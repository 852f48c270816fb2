"""Session plumbing for the acceptance run.

The acceptance module is moved to the end of the run so it can reuse the
outcomes of ``invariant``-marked tests already executed in the same session.
Each acceptance criterion appends a PASS/FAIL line that is repeated in the
terminal summary.
"""

import pytest

OUTCOMES = pytest.StashKey[dict]()
CRITERIA = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[OUTCOMES] = {}
    config.stash[CRITERIA] = []


def pytest_collection_modifyitems(config, items):
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.get_closest_marker("invariant") is None:
        return
    if report.when == "call" or report.failed or report.skipped:
        outcomes = item.config.stash[OUTCOMES]
        if outcomes.get(report.nodeid) != "failed":
            outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[CRITERIA]
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line[1])
