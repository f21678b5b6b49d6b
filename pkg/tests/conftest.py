import random

import pytest

from mampcg import MixedGraph, fixture_graph
from mampcg.randomgraphs import random_valid_graph


@pytest.fixture(scope="session")
def amp_square():
    return fixture_graph("amp_square")


@pytest.fixture(scope="session")
def mamp_square():
    return fixture_graph("mamp_square")


@pytest.fixture(scope="session")
def kite():
    return fixture_graph("mamp_kite")


@pytest.fixture(scope="session")
def wings():
    return fixture_graph("mamp_wings")


@pytest.fixture(scope="session")
def mag():
    return fixture_graph("mag_diamond")


@pytest.fixture(scope="session")
def fork():
    return fixture_graph("rcg_fork")


@pytest.fixture(scope="session")
def invalid_graph():
    return fixture_graph("c2c3_invalid")


def graph_from_seed(seed, family="mamp", sizes=(3, 4, 5), edge_prob=0.35):
    """Deterministic random valid graph; used to pair hypothesis with the
    seeded generator."""
    rng = random.Random(seed)
    return random_valid_graph(rng, family, rng.choice(sizes), edge_prob)


def g(*edge_specs, **kwargs):
    return MixedGraph.from_strings(*edge_specs, **kwargs)
