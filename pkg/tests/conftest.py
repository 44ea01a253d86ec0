import pytest

from kirwan.hyperpolygon import EdgeLengths, HyperpolygonInstance


@pytest.fixture(scope="session")
def inst3():
    return HyperpolygonInstance(EdgeLengths([1, 1, 1]))


@pytest.fixture(scope="session")
def inst4():
    return HyperpolygonInstance(EdgeLengths([1, 1, 1, 2]))


@pytest.fixture(scope="session")
def inst5():
    return HyperpolygonInstance(EdgeLengths([1, 2, 4, 8, 16]))
