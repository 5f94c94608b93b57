import pytest

from evasive10.graphs import build_catalog, build_poset


@pytest.fixture(scope="session")
def catalog10():
    return build_catalog(10)


@pytest.fixture(scope="session")
def poset10(catalog10):
    return build_poset(catalog10)


@pytest.fixture(scope="session")
def catalog5():
    return build_catalog(5)


@pytest.fixture(scope="session")
def poset5(catalog5):
    return build_poset(catalog5)
