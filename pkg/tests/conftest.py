import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from cvlab.exact import GaussianRational

ACCEPTANCE_LINES = []


def small_fraction(lo=-5, hi=5):
    return st.builds(Fraction, st.integers(lo, hi), st.integers(1, hi))


def gaussian_rationals(lo=-5, hi=5):
    return st.builds(GaussianRational, small_fraction(lo, hi), small_fraction(lo, hi))


def random_gaussian(rng: random.Random, bound: int = 5) -> GaussianRational:
    return GaussianRational(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)),
                            Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
