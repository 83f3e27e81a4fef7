import pytest

from gkcodes.curve import make_curve
from gkcodes.fields import make_tower


@pytest.fixture(scope="session")
def tower2():
    return make_tower(2, 1)


@pytest.fixture(scope="session")
def tower3():
    return make_tower(3, 1)


@pytest.fixture(scope="session")
def curve2():
    return make_curve(2, 1)


@pytest.fixture(scope="session")
def curve3():
    return make_curve(3, 1)
