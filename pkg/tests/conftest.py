import os

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def pytest_configure(config):
    # keep the animal cache out of the user's home during test runs
    if "GRAINSTAT_CACHE_DIR" not in os.environ:
        os.environ["GRAINSTAT_CACHE_DIR"] = str(config.rootpath / ".pytest_cache" / "grainstat")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table():
    from grainstat.animals import build_table

    return build_table(14)


@pytest.fixture(scope="session")
def table10():
    from grainstat.animals import build_table

    return build_table(10)


def checkerboard(n=256, block=32):
    yy, xx = np.indices((n, n))
    return ((yy // block + xx // block) % 2).astype(bool)


def make_test_card(n=256):
    """Piecewise-constant grey image with large flat regions."""
    card = np.full((n, n), 40, np.uint8)
    card[:, n // 2:] = 200
    card[n // 4: 3 * n // 4, n // 4: 3 * n // 4] = 120
    card[n // 8: 3 * n // 8, 5 * n // 8: 7 * n // 8] = 250
    card[5 * n // 8: 7 * n // 8, n // 8: 3 * n // 8] = 0
    return card
