import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fracgap import sieve


@pytest.fixture(scope="session")
def table_1e4():
    return sieve(10**4)


@pytest.fixture(scope="session")
def table_1e6(acceptance_table):
    return acceptance_table.restrict(10**6)


@pytest.fixture(scope="session")
def table_1e7(acceptance_table):
    return acceptance_table.restrict(10**7)


@pytest.fixture(scope="session")
def acceptance_table():
    # large enough for 10**6 assumption terms (p_{10^6 + 1} = 15485867)
    return sieve(15_500_000)
