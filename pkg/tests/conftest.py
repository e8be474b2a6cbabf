"""Shared pytest wiring: the ``criterion`` marker and the acceptance summary.

Tests tagged ``@pytest.mark.criterion(n, "label")`` are grouped by ``n``; after
the run one PASS/FAIL line per criterion is printed.  A criterion passes when
every test carrying its number passed.
"""
from collections import defaultdict

_CRITERIA = {}                      # nodeid -> (number, label)
_OUTCOMES = defaultdict(list)       # number -> [passed?]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion this test evidences")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = (mark.args[0], mark.args[1] if len(mark.args) > 1 else "")


def pytest_runtest_logreport(report):
    if report.nodeid not in _CRITERIA:
        return
    number = _CRITERIA[report.nodeid][0]
    if report.when == "call" or report.failed or report.skipped:
        _OUTCOMES[number].append(report.passed and report.when == "call")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    labels = {}
    for number, label in _CRITERIA.values():
        labels.setdefault(number, label)
    terminalreporter.section("acceptance criteria")
    for number in sorted(labels):
        results = _OUTCOMES.get(number, [])
        status = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {labels[number]}")
