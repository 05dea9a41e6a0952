import pytest
from hypothesis import HealthCheck, settings

from wernick.catalog import load_catalog
from wernick.kb import default_kb
from wernick.solver import run_one, solve

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def kb():
    return default_kb()


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def corpus(kb, catalog):
    """Outcome for every catalog entry, in catalog order."""
    return {e.index: run_one(kb, e.problem()) for e in catalog}


@pytest.fixture(scope="session")
def solved(corpus):
    return {i: o for i, o in corpus.items() if o.solved}


@pytest.fixture(scope="session")
def raw_plans(kb, solved):
    return {i: solve(kb, o.problem) for i, o in solved.items()}


# acceptance criteria record their verdicts here; printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
