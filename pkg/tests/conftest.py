import numpy as np
import pytest
from hypothesis import settings

from qconcepts import hilbert, ingest, wavefield

np.seterr(over="raise", invalid="raise", divide="raise")

settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("fast", max_examples=20, deadline=None)
settings.load_profile("ci")

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus():
    return ingest.load_bundled_corpus()


@pytest.fixture(scope="session")
def raw_corpus():
    return ingest.load_bundled_corpus(renormalize_columns=False)


@pytest.fixture(scope="session")
def model(corpus):
    return hilbert.build_state_vectors(corpus)


@pytest.fixture(scope="session")
def table2():
    return wavefield.load_bundled_spec()
