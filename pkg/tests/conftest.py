import pytest

import finitegauge as fg
from finitegauge.golden import golden_models, triangle_holonomy_example


@pytest.fixture(scope="session")
def z2():
    return fg.cyclic(2)


@pytest.fixture(scope="session")
def z3():
    return fg.cyclic(3)


@pytest.fixture(scope="session")
def z4():
    return fg.cyclic(4)


@pytest.fixture(scope="session")
def s3():
    return fg.symmetric(3)


@pytest.fixture(scope="session")
def k2():
    return fg.Neighbourhood.codiscrete(("a", "b"))


@pytest.fixture(scope="session")
def k3():
    return fg.Neighbourhood.codiscrete(("a", "b", "c"))


@pytest.fixture(scope="session")
def triangle_z2(k3, z2):
    return fg.trivial_model(k3, z2)


@pytest.fixture(scope="session")
def triangle_s3(k3, s3):
    return fg.trivial_model(k3, s3)


@pytest.fixture(scope="session")
def golden():
    return golden_models()


@pytest.fixture(scope="session")
def holonomy_example():
    return triangle_holonomy_example()
