import pytest

from rorcert.exactalg import RatFunc, S
from rorcert.fixtures import load_fixture, regulation_problem
from rorcert.ratmat import RatMat

s = RatFunc(S)


def rf(text):
    from rorcert.parse import parse_ratfunc

    return parse_ratfunc(text)


@pytest.fixture(scope="session")
def quadtank():
    return load_fixture("quadtank")


@pytest.fixture(scope="session")
def quadtank_typo():
    return load_fixture("quadtank-typo")


@pytest.fixture(scope="session")
def qt_problem(quadtank):
    return regulation_problem(quadtank)


@pytest.fixture(scope="session")
def qt_typo_problem(quadtank_typo):
    return regulation_problem(quadtank_typo)


@pytest.fixture(scope="session")
def theta():
    return (s + 1) ** 3 / (s * (s**2 + 1))


@pytest.fixture
def I2():
    return RatMat.identity(2)


_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    failed = report.failed or (report.when == "call" and report.skipped)
    prev = _CRITERIA.get(number, (title, True))
    _CRITERIA[number] = (title, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
