import numpy as np
import pytest

BLOCK = np.array(
    [
        [64, 2, 3, 61, 60, 6, 7, 57],
        [9, 55, 54, 12, 13, 51, 50, 16],
        [17, 47, 46, 20, 21, 43, 42, 24],
        [40, 26, 27, 37, 36, 30, 31, 33],
        [32, 34, 35, 29, 28, 38, 39, 25],
        [41, 23, 22, 44, 45, 19, 18, 48],
        [49, 15, 14, 52, 53, 11, 10, 56],
        [8, 58, 59, 5, 4, 62, 63, 1],
    ],
    dtype=np.uint8,
)

# rows transformed only
BLOCK_ROWS = np.array(
    [
        [32.5, 0, 0.5, 0.5, 31, -29, 27, -25],
        [32.5, 0, -0.5, -0.5, -23, 21, -19, 17],
        [32.5, 0, -0.5, -0.5, -15, 13, -11, 9],
        [32.5, 0, 0.5, 0.5, 7, -5, 3, -1],
        [32.5, 0, 0.5, 0.5, -1, 3, -5, 7],
        [32.5, 0, -0.5, -0.5, 9, -11, 13, -15],
        [32.5, 0, -0.5, -0.5, 17, -19, 21, -23],
        [32.5, 0, 0.5, 0.5, -25, 27, -29, 31],
    ]
)

BLOCK_T = np.array(
    [
        [32.5, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 4, -4, 4, -4],
        [0, 0, 0, 0, 4, -4, 4, -4],
        [0, 0, 0.5, 0.5, 27, -25, 23, -21],
        [0, 0, -0.5, -0.5, -11, 9, -7, 5],
        [0, 0, 0.5, 0.5, -5, 7, -9, 11],
        [0, 0, -0.5, -0.5, 21, -23, 25, -27],
    ]
)


@pytest.fixture
def block():
    return BLOCK.copy()


@pytest.fixture
def block_t():
    return BLOCK_T.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def data_dir():
    from pathlib import Path

    return Path(__file__).parent / "data"


# -- acceptance summary ------------------------------------------------------

_criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria.append((marker.args[0], marker.args[1], rep.outcome))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_criteria):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] AC{number:>2}  {title}")
