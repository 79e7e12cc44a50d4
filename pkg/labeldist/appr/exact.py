import logging
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from labeldist.errors import InputError, NumericalError
from labeldist.graph.csr import Graph

logger = logging.getLogger(__name__)

TOLERANCE = 1e-14
MAX_ITERATIONS = 1_000_000


def exact_ppr_matrix(g: Graph, alpha: float, seeds: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Power-iteration PPR for a batch of seeds; row k belongs to `seeds[k]`.

    Solves pi = a' e_s + (1 - a') pi D^-1 A with a' = 2a / (1 + a), the fixed
    point of the push recurrence. Walk mass that reaches an isolated node goes
    back to the seed.
    """
    if not 0.0 < alpha <= 1.0:
        raise InputError(f"alpha must be in (0, 1], got {alpha}")
    seeds = np.arange(g.n, dtype=np.int64) if seeds is None else np.asarray(seeds, dtype=np.int64)
    if seeds.size and (seeds.min() < 0 or seeds.max() >= g.n):
        raise InputError(f"seeds must lie in [0, {g.n})")

    teleport = 2.0 * alpha / (1.0 + alpha)
    degrees = g.degrees.astype(np.float64)
    inv_degree = np.zeros_like(degrees)
    inv_degree[degrees > 0] = 1.0 / degrees[degrees > 0]
    walk = sp.diags(inv_degree) @ g.adjacency()
    walk_t = walk.T.tocsr()
    isolated = degrees == 0

    start = np.zeros((seeds.size, g.n), dtype=np.float64)
    start[np.arange(seeds.size), seeds] = 1.0

    pi = start.copy()
    for iteration in range(MAX_ITERATIONS):
        stepped = (walk_t @ pi.T).T
        stepped[np.arange(seeds.size), seeds] += pi[:, isolated].sum(axis=1)
        updated = teleport * start + (1.0 - teleport) * stepped
        delta = np.abs(updated - pi).max(initial=0.0)
        pi = updated
        if delta < TOLERANCE:
            logger.debug(f"Exact PPR converged after {iteration + 1} iterations")
            return pi

    raise NumericalError(f"exact PPR did not converge within {MAX_ITERATIONS} iterations")


def exact_ppr(g: Graph, seed: int, alpha: float) -> np.ndarray:
    return exact_ppr_matrix(g, alpha, [seed])[0]
