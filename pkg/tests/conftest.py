import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from matchkast.corpus import gen_corpus  # noqa: E402


@pytest.fixture(scope="session")
def corpus():
    return gen_corpus(seed=0)


@pytest.fixture(scope="session")
def corpus_graphs(corpus):
    return [e for e in corpus if e.kind == "graph"]


@pytest.fixture(scope="session")
def corpus_compounds(corpus):
    return [e for e in corpus if e.kind == "compound"]


@pytest.fixture(scope="session")
def corpus_symmetric(corpus):
    return [e for e in corpus if e.kind == "symmetric"]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
