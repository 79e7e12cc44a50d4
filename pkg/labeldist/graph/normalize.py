import numpy as np
import scipy.sparse as sp

from labeldist.graph.csr import Graph


def sym_normalized_adjacency(g: Graph, add_self_loops: bool = False) -> sp.csr_matrix:
    """
    D^-1/2 (A + S) D^-1/2 with S = I when `add_self_loops`, D the degree matrix of A + S.

    Rows of isolated nodes stay all-zero when there are no self-loops.
    """
    adj = g.adjacency()
    if add_self_loops:
        adj = (adj + sp.identity(g.n, dtype=np.float64, format="csr")).tocsr()

    degrees = np.asarray(adj.sum(axis=1)).ravel()
    inv_sqrt = np.zeros_like(degrees)
    nonzero = degrees > 0
    inv_sqrt[nonzero] = 1.0 / np.sqrt(degrees[nonzero])

    d_inv_sqrt = sp.diags(inv_sqrt)
    normalized = (d_inv_sqrt @ adj @ d_inv_sqrt).tocsr()
    normalized.sort_indices()
    return normalized
