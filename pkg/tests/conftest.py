import pytest

from grpd.groups import cyclic_group, trivial_action
from grpd.instance import load_corpus
from grpd.space import GraphAction, SpaceGraph


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def reflection(corpus):
    return corpus["reflection-c4"].gaction


@pytest.fixture(scope="session")
def rotation(corpus):
    return corpus["rotation-c6"].gaction


def point_space(group):
    return GraphAction(SpaceGraph(("•",), frozenset()), trivial_action(group, ["•"]))


@pytest.fixture
def z2():
    return cyclic_group(2, "g")
