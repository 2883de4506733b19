import pytest
from hypothesis import settings

from bilex.catalog import load_catalog

settings.register_profile("bilex", deadline=None, max_examples=60)
settings.load_profile("bilex")

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 31, 101, 1009]


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


def naive_order(x: int, p: int) -> int:
    """Multiplicative order of x mod p by repeated multiplication."""
    y, k = x % p, 1
    while y != 1:
        y, k = y * x % p, k + 1
    return k


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
