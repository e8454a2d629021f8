import pytest

from verifylab.corpus import load_manifest
from verifylab.rearrange import log_grid, rearrange

_CRITERIA: dict[int, str] = {}
_NODE_CRITERION: dict[str, int] = {}
_OUTCOMES: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(session, config, items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            num, title = m.args
            _CRITERIA[num] = title
            _NODE_CRITERION[item.nodeid] = num


def pytest_runtest_logreport(report):
    num = _NODE_CRITERION.get(report.nodeid)
    if num is None:
        return
    if report.when == "call" or report.outcome != "passed":
        outcome = "skipped" if report.skipped else report.outcome
        _OUTCOMES.setdefault(num, []).append(outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        outs = _OUTCOMES.get(num, [])
        if not outs:
            status = "NOT RUN"
        elif any(o == "failed" for o in outs):
            status = "FAIL"
        elif all(o == "passed" for o in outs):
            status = "PASS"
        else:
            status = "SKIP"
        passed = sum(o == "passed" for o in outs)
        tr.write_line(f"criterion {num:>2} {status:<7} {_CRITERIA[num]} ({passed}/{len(outs)} tests passed)")


# -- shared fixtures -------------------------------------------------------------


@pytest.fixture(scope="session")
def t_grid():
    return log_grid(1e-4, 1e4, 256)


@pytest.fixture(scope="session")
def corpus():
    return [e.build() for e in load_manifest()]


@pytest.fixture(scope="session")
def corpus_profiles(corpus, t_grid):
    return [rearrange(f, t_grid) for f in corpus]
