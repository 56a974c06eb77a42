import pytest

from nuttq.oracle import read_golden


@pytest.fixture(scope="session")
def golden_entries():
    return read_golden()
