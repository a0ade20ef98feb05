import pytest

from mfsi.arith import build_factor_table, sieve_primes
from mfsi.catalog import tau_table


@pytest.fixture(scope="session")
def pt_small():
    return sieve_primes(10**4)


@pytest.fixture(scope="session")
def ft_small():
    return build_factor_table(10**4)


@pytest.fixture(scope="session")
def tau_small():
    return tau_table(2000)


# Full-scale fixtures shared by the acceptance suite; each is built once
# per session the first time a test asks for it.

@pytest.fixture(scope="session")
def pt_big():
    return sieve_primes(10**6)


@pytest.fixture(scope="session")
def ft_big():
    return build_factor_table(10**6)


@pytest.fixture(scope="session")
def tau_big():
    return tau_table(10**6)
