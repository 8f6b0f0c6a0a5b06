import pytest

from primetail import sieve_range


@pytest.fixture(scope="session")
def table_1e6():
    return sieve_range(0, 10 ** 6 + 64)


@pytest.fixture(scope="session")
def table_1e7():
    return sieve_range(0, 10 ** 7 + 64)
