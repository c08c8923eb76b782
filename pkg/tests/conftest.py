import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"
MINI = DATA / "mini"


@pytest.fixture
def mini():
    return MINI


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def mini_corpus():
    from comention.corpus import load_corpus

    return load_corpus(MINI / "texts", MINI / "metadata.tsv")


# --- acceptance summary ---------------------------------------------------

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[-1]
        _acceptance[name] = "PASS" if report.passed else report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items()):
        terminalreporter.write_line(f"{outcome:5s} {name}")
