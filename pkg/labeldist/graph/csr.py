import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Tuple

import numpy as np
import scipy.sparse as sp

from labeldist.errors import InputError


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Immutable undirected graph in CSR form.

    Every undirected edge is stored in both rows, there are no self-links and
    the column indices of a row are strictly increasing.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @cached_property
    def degrees(self) -> np.ndarray:
        degrees = np.diff(self.indptr)
        degrees.setflags(write=False)
        return degrees

    @property
    def num_edges(self) -> int:
        return int(self.indices.shape[0] // 2)

    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(self.indices.shape[0], dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def content_hash(self) -> str:
        digest = hashlib.sha256()
        digest.update(np.int64(self.n).tobytes())
        digest.update(np.ascontiguousarray(self.indptr, dtype="<i8").tobytes())
        digest.update(np.ascontiguousarray(self.indices, dtype="<i8").tobytes())
        return digest.hexdigest()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"


def build_graph(edge_pairs: Iterable[Tuple[int, int]], n: int) -> Graph:
    """
    Build a canonical graph from an edge list.

    Duplicates collapse, both directions are stored and self-links are dropped.

    Args:
        edge_pairs: iterable of (u, v) node ids
        n: node count

    Returns:
        Graph with sorted CSR rows
    """
    if n < 0:
        raise InputError(f"node count must be non-negative, got {n}")

    pairs = np.asarray(list(edge_pairs), dtype=np.int64).reshape(-1, 2)
    out_of_range = (pairs < 0) | (pairs >= n)
    if out_of_range.any():
        bad = pairs[np.flatnonzero(out_of_range.any(axis=1))[0]]
        raise InputError(f"edge ({bad[0]}, {bad[1]}) has an endpoint outside [0, {n})")

    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
    cols = np.concatenate([pairs[:, 1], pairs[:, 0]])

    # Row-major keys give sorted, deduplicated CSR order in one pass
    keys = np.unique(rows * np.int64(max(n, 1)) + cols)
    rows, cols = np.divmod(keys, np.int64(max(n, 1)))

    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return Graph(n=n, indptr=indptr, indices=cols.astype(np.int64))


def neighbors(g: Graph, u: int) -> List[int]:
    if not 0 <= u < g.n:
        raise InputError(f"node {u} outside [0, {g.n})")
    return g.indices[g.indptr[u]:g.indptr[u + 1]].tolist()


def edges_of(g: Graph) -> List[Tuple[int, int]]:
    """Canonical undirected edge list, each edge once with i < j."""
    rows = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees)
    keep = rows < g.indices
    return list(zip(rows[keep].tolist(), g.indices[keep].tolist()))
