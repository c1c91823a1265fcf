import pytest

from cantorproj import Family


@pytest.fixture(scope="session")
def fam() -> Family:
    # The generator memoizes append-only state, so sharing one instance
    # across tests only warms caches and cannot change any answer.
    return Family()
