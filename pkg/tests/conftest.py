import random

import pytest

from chowsmooth.charts import CORPUS_DIR


@pytest.fixture
def corpus():
    return CORPUS_DIR


@pytest.fixture
def rng():
    return random.Random(20261015)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
