from math import gcd

import numpy as np
import pytest

from gencirc.circulant import CirculantSpec


def random_weights(rng, m, low=0.5, high=2.0):
    return rng.uniform(low, high, m) * np.exp(2j * np.pi * rng.random(m))


def random_spec(rng, m, s, degree=None):
    if degree is None:
        degree = int(rng.integers(0, 3 * m + 1))
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return CirculantSpec.build(m, s, random_weights(rng, m), c)


def shifts_for(m, case):
    """All shifts of the given structural case for this m."""
    if case == "s1":
        return [1] if m > 1 else []
    if case == "coprime":
        return [s for s in range(2, m) if gcd(s, m) == 1]
    if case == "divisor":
        return [s for s in range(2, m) if m % s == 0]
    if case == "general":
        return [s for s in range(2, m) if gcd(s, m) > 1 and m % s]
    raise ValueError(case)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def example12():
    return CirculantSpec.build(3, 1, [-2, -3, 1], [1j, -1, 3, -1j / 6, 0.5, -0.5])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
