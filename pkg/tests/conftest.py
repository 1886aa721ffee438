import random

import pytest

from koornwinder_asep import ParamPoint, random_params
from koornwinder_asep.exact import Q


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def maximal_current():
    return ParamPoint(Q("1/2"), Q("-1/2"), Q("1/3"), Q("-1/2"), Q("1/5"))


@pytest.fixture
def physical_points():
    r = random.Random(97)
    return [random_params(r) for _ in range(3)]
