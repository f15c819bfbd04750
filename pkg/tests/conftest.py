import numpy as np
import pytest

from cotkahler import LambdaFamily, NaturalStructure, SpaceFormChart


def flat(n=2):
    return NaturalStructure(SpaceFormChart(n, 0.0), LambdaFamily.constant(1.0))


def positive(n=3, A=1.0):
    return NaturalStructure(SpaceFormChart(n, 1.0), LambdaFamily.inverse_sqrt(1.0, 1.0, A=A))


def negative(n=3, A=1.0):
    return NaturalStructure(SpaceFormChart(n, -1.0), LambdaFamily.power(2, 1.0, A=A))


STRUCTURES = {"flat": flat, "positive": positive, "negative": negative}


@pytest.fixture(params=sorted(STRUCTURES))
def structure(request):
    return STRUCTURES[request.param]()


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
