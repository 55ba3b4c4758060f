import pytest

from etlab.tower import TowerCache


@pytest.fixture(scope="session")
def cache():
    return TowerCache()
