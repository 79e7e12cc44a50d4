import os

import networkx as nx
import numpy as np
import pytest

from labeldist.datasets.synthetic import make_network_synthetic
from labeldist.graph.csr import Graph, build_graph

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def graph_from_networkx(nx_graph) -> Graph:
    nx_graph = nx.convert_node_labels_to_integers(nx_graph)
    return build_graph(nx_graph.edges(), nx_graph.number_of_nodes())


def random_connected_graphs(count: int, max_nodes: int, seed: int = 0):
    """Connected G(n, p) graphs with 2..max_nodes nodes."""
    rng = np.random.default_rng(seed)
    graphs = []
    while len(graphs) < count:
        n = int(rng.integers(2, max_nodes + 1))
        candidate = nx.gnp_random_graph(n, float(rng.uniform(0.3, 0.9)), seed=int(rng.integers(2**31)))
        if nx.is_connected(candidate):
            graphs.append(graph_from_networkx(candidate))
    return graphs


@pytest.fixture
def triangle() -> Graph:
    return build_graph([(0, 1), (1, 2), (2, 0)], 3)


@pytest.fixture
def star() -> Graph:
    """Center 0 with leaves 1..4."""
    return build_graph([(0, leaf) for leaf in range(1, 5)], 5)


@pytest.fixture
def path3() -> Graph:
    return build_graph([(0, 1), (1, 2)], 3)


@pytest.fixture
def medium_graph() -> Graph:
    return graph_from_networkx(nx.connected_watts_strogatz_graph(100, 4, 0.3, seed=7))


@pytest.fixture(scope="session")
def network_dataset():
    return make_network_synthetic(num_components=10, seed=3)


@pytest.fixture
def small_network_dataset():
    return make_network_synthetic(num_components=4, seed=1, printers_per_component=4, databases_per_component=4)
