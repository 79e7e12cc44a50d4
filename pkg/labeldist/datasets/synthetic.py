import logging
from typing import List, Tuple

import numpy as np

from labeldist.datasets.dataset import Dataset
from labeldist.errors import InputError
from labeldist.features.labels import LabelMatrix, Task
from labeldist.graph.csr import build_graph

logger = logging.getLogger(__name__)

NETWORK_ROLES = ["user", "server", "database", "printer"]
USER, SERVER, DATABASE, PRINTER = range(4)


def _ring(nodes: List[int]) -> List[Tuple[int, int]]:
    return [(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))]


def make_network_synthetic(num_components: int, seed: int, printers_per_component: int = 8,
                           databases_per_component: int = 8) -> Dataset:
    """
    Communication networks where printers and databases look alike structurally.

    Each component has a ring of users and a ring of servers. Every printer is
    wired to two users, every database to one user and one server, and every
    user and server serves exactly one device. Printers and databases thus have
    degree 2 and neighbors of degree 3; only the labels of their neighbors tell
    them apart. Users and servers are context nodes, devices are targets.
    """
    if num_components < 2:
        raise InputError(f"need at least 2 components, got {num_components}")
    if printers_per_component < 1 or databases_per_component < 3:
        raise InputError("need at least one printer and three databases per component")

    rng = np.random.default_rng(seed)
    roles: List[int] = []
    components: List[int] = []
    edges: List[Tuple[int, int]] = []

    def add(role: int, component: int) -> int:
        roles.append(role)
        components.append(component)
        return len(roles) - 1

    for c in range(num_components):
        n_users = 2 * printers_per_component + databases_per_component
        users = [add(USER, c) for _ in range(n_users)]
        servers = [add(SERVER, c) for _ in range(databases_per_component)]
        printers = [add(PRINTER, c) for _ in range(printers_per_component)]
        databases = [add(DATABASE, c) for _ in range(databases_per_component)]

        edges += _ring(list(rng.permutation(users)))
        edges += _ring(list(rng.permutation(servers)))

        free_users = iter(rng.permutation(users).tolist())
        for printer in printers:
            edges += [(printer, next(free_users)), (printer, next(free_users))]
        for database, server in zip(databases, rng.permutation(servers).tolist()):
            edges += [(database, next(free_users)), (database, server)]

    # Shuffle node ids so that components are not contiguous
    n = len(roles)
    relabel = rng.permutation(n)
    edges = [(int(relabel[u]), int(relabel[v])) for u, v in edges]
    role_of = np.empty(n, dtype=np.int64)
    role_of[relabel] = roles
    component_of = np.empty(n, dtype=np.int64)
    component_of[relabel] = components

    graph = build_graph(edges, n)
    labels = LabelMatrix.from_classes(role_of, len(NETWORK_ROLES))
    logger.info(f"Generated {num_components} communication networks, {n} nodes, {graph.num_edges} edges")
    ds = Dataset(
        graph=graph,
        labels=labels,
        node_ids=[f"n{i}" for i in range(n)],
        label_names=list(NETWORK_ROLES),
        task=Task.MULTICLASS,
    )
    return ds.with_components(component_of, (role_of == USER) | (role_of == SERVER))


def make_multilabel_synthetic(n_communities: int = 8, community_size: int = 40, seed: int = 0,
                              p_in: float = 0.2, p_out: float = 0.005) -> Dataset:
    """
    Multilabel planted-partition graph: community c carries labels c and
    (c + 1) mod n_communities, and edges mostly stay inside a community, so
    the labels are visible in the 1-hop neighborhood.
    """
    if n_communities < 2 or community_size < 2:
        raise InputError("need at least 2 communities of at least 2 nodes")
    rng = np.random.default_rng(seed)
    n = n_communities * community_size
    community = np.repeat(np.arange(n_communities), community_size)

    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    same = community[:, None] == community[None, :]
    probability = np.where(same, p_in, p_out)
    chosen = upper & (rng.random((n, n)) < probability)
    rows, cols = np.nonzero(chosen)

    y = np.zeros((n, n_communities), dtype=np.uint8)
    y[np.arange(n), community] = 1
    y[np.arange(n), (community + 1) % n_communities] = 1

    graph = build_graph(zip(rows.tolist(), cols.tolist()), n)
    return Dataset(
        graph=graph,
        labels=LabelMatrix(y=y, labeled_mask=np.ones(n, dtype=bool), task=Task.MULTILABEL),
        node_ids=[f"v{i}" for i in range(n)],
        label_names=[f"genre{j}" for j in range(n_communities)],
        task=Task.MULTILABEL,
    )
