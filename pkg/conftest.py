import pytest

from pyexstates.states.special_functions import default_table

# Largest factorial index the test-suite touches (coherent limit at M=10^4).
TEST_TABLE_SIZE = 20_000


@pytest.fixture(scope="session", autouse=True)
def log_factorial_table():
    table = default_table()
    table.reserve(TEST_TABLE_SIZE)
    print("Log-factorial table holds indices up to", table.size)
    return table
