import pytest

from degreelab.pca import Pca
from degreelab.terms import K, Oracle, S


@pytest.fixture(scope="session")
def pca():
    """Structure with one empty oracle table: #o1 is a genuine non-computable atom."""
    return Pca(oracles={"o1": {}})


@pytest.fixture(scope="session")
def pure():
    return Pca()


@pytest.fixture(scope="session")
def o1():
    return Oracle("o1")
