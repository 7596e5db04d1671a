import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import matrixcode as mc

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def corpus():
    names = ["primes", "primes0", "primes1", "primes2",
             "mrg0", "mrg1", "mrg2", "emerge", "turing", "decnum"]
    return {name: mc.load_corpus(name) for name in names}


@pytest.fixture(scope="session")
def primes(corpus):
    return corpus["primes"]


@pytest.fixture(scope="session")
def mrg2(corpus):
    return corpus["mrg2"]


@pytest.fixture(scope="session")
def primes_vector_report(primes):
    return mc.check_vector(primes.vector, primes.matrix, primes.domain)


@pytest.fixture(scope="session")
def mrg2_vector_report(mrg2):
    return mc.check_vector(mrg2.vector, mrg2.matrix, mrg2.domain)


@pytest.fixture(scope="session")
def primes_domain_completeness(primes):
    return mc.completeness(primes.matrix, primes.vector, dom=primes.domain)


def fixture_path(name):
    return FIXTURES / name


def golden_path(name):
    return GOLDEN / name


def _fmt(v):
    if isinstance(v, (tuple, list)):
        return "[%s]" % ",".join(str(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def initial_state(matrix, **bindings):
    from matrixcode.cli import build_initial_state
    return build_initial_state(matrix, {k: _fmt(v) for k, v in bindings.items()})
