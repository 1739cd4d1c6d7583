import pytest

from quadnorm.cyclicext import period_polynomial
from quadnorm.quadfield import make_field


@pytest.fixture(scope="session")
def field79():
    return make_field(79)


@pytest.fixture(scope="session")
def field10():
    return make_field(10)


@pytest.fixture(scope="session")
def desc7():
    return period_polynomial(7, 3, 1)


@pytest.fixture(scope="session")
def desc13():
    return period_polynomial(13, 3, 1)


@pytest.fixture(scope="session")
def desc37():
    return period_polynomial(37, 3, 1)
