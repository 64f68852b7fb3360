import numpy as np
import pytest

from kcmd import Gaussian, Sample, gram_pair

ACCEPTANCE_LINES = []


def random_sample(rng, n, dx=2, dy=2, y_shift=0.0):
    x = rng.standard_normal((n, dx))
    y = rng.standard_normal((n, dy)) + y_shift
    return Sample.from_arrays(x, y)


def random_gram(rng, n, dx=2, dy=2):
    """Gram pair from random vector data and a random Gaussian bandwidth."""
    sample = random_sample(rng, n, dx, dy, y_shift=rng.normal())
    return gram_pair(Gaussian(rng.uniform(0.3, 2.0)), sample)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
