import pytest

from subcatdyn.cli import corpus_dir
from subcatdyn.documents import load_documents


@pytest.fixture(scope="session")
def corpus():
    return load_documents([corpus_dir()])


@pytest.fixture(scope="session")
def chain3(corpus):
    return corpus.categories["chain3"]


@pytest.fixture(scope="session")
def alpha1(corpus):
    return corpus.dynamics["alpha1"]


@pytest.fixture(scope="session")
def alpha2(corpus):
    return corpus.dynamics["alpha2"]


@pytest.fixture(scope="session")
def clock_x(corpus):
    return corpus.clocks["clock_x"]


@pytest.fixture(scope="session")
def mimicry(corpus):
    return corpus.families["mimicry"]
