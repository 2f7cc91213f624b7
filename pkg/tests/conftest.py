import pytest

import support
from etma import apply_reduction, enumerate_paths, generate_complete


@pytest.fixture
def trip_model():
    return support.trip_model()


@pytest.fixture
def trip_table():
    return support.trip_table()


@pytest.fixture
def trip_directives():
    return support.trip_directives()


@pytest.fixture
def trip_complete(trip_model):
    return generate_complete(trip_model)


@pytest.fixture
def trip_reduced(trip_complete, trip_directives):
    return apply_reduction(trip_complete, trip_directives)


@pytest.fixture
def trip_reduced_paths(trip_reduced):
    return enumerate_paths(trip_reduced)


@pytest.fixture
def abc_model():
    return support.abc_model()
