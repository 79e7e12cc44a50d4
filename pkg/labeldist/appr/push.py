from dataclasses import dataclass

import numpy as np
from numba import njit
from pydantic import BaseModel, ConfigDict, Field

from labeldist.errors import InputError
from labeldist.graph.csr import Graph


class ApprConfig(BaseModel):
    """Teleportation probability `alpha` in (0, 1] and approximation threshold `epsilon` > 0."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(gt=0.0, le=1.0)
    epsilon: float = Field(gt=0.0)


@dataclass(frozen=True)
class ApprVector:
    """
    Result of one push run: sparse solution `p` and residual `r`.

    Index arrays are sorted. `work` is the sum of d(u) over every push
    performed, `pushes` the number of pushes.
    """

    seed: int
    p_indices: np.ndarray
    p_values: np.ndarray
    r_indices: np.ndarray
    r_values: np.ndarray
    work: float = 0.0
    pushes: int = 0

    def p_dense(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=np.float64)
        out[self.p_indices] = self.p_values
        return out

    def r_dense(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=np.float64)
        out[self.r_indices] = self.r_values
        return out

    @property
    def total_mass(self) -> float:
        return float(self.p_values.sum() + self.r_values.sum())


@njit(nogil=True, cache=True)
def _push_kernel(seed, indptr, indices, alpha, epsilon):
    n = indptr.shape[0] - 1
    p = np.zeros(n, dtype=np.float64)
    r = np.zeros(n, dtype=np.float64)
    in_queue = np.zeros(n, dtype=np.bool_)
    seen = np.zeros(n, dtype=np.bool_)
    touched = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)

    stop_share = 2.0 * alpha / (1.0 + alpha)
    spread_share = (1.0 - alpha) / (1.0 + alpha)

    r[seed] = 1.0
    seen[seed] = True
    touched[0] = seed
    n_touched = 1
    head = 0
    size = 0
    work = 0.0
    pushes = 0

    # Seed is queued only if its unit residual already exceeds the threshold
    if r[seed] >= epsilon * (indptr[seed + 1] - indptr[seed]):
        queue[0] = seed
        in_queue[seed] = True
        size = 1

    # FIFO ring buffer; the in-queue flag keeps at most n entries alive
    while size > 0:
        u = queue[head]
        head = (head + 1) % n
        size -= 1
        in_queue[u] = False

        start = indptr[u]
        end = indptr[u + 1]
        degree = end - start
        # Settle part of the residual at u, spread the rest
        mass = r[u]
        p[u] += stop_share * mass
        r[u] = 0.0
        share = spread_share * mass / degree
        work += degree
        pushes += 1

        for k in range(start, end):
            v = indices[k]
            r[v] += share
            if not seen[v]:
                seen[v] = True
                touched[n_touched] = v
                n_touched += 1
            # enqueue once the residual crosses eps * d(v)
            if not in_queue[v] and r[v] >= epsilon * (indptr[v + 1] - indptr[v]):
                queue[(head + size) % n] = v
                in_queue[v] = True
                size += 1

    nodes = np.sort(touched[:n_touched])
    return nodes, p[nodes], r[nodes], work, pushes


def approximate_ppr(g: Graph, seed: int, cfg: ApprConfig) -> ApprVector:
    """
    Approximate personalized PageRank of `seed` by repeated push operations.

    A push at u keeps 2a/(1+a) of the residual r(u) in p(u) and spreads
    (1-a)/(1+a) of it evenly over the neighbors of u. Nodes enter a FIFO work
    queue once r(u) >= eps * d(u); the run ends when the queue is empty, so
    every non-isolated u ends with r(u) < eps * d(u).

    Args:
        g: the graph
        seed: start node
        cfg: alpha and epsilon

    Returns:
        ApprVector with sorted sparse p and r
    """
    if not 0 <= seed < g.n:
        raise InputError(f"seed {seed} outside [0, {g.n})")

    # The walk never leaves an isolated seed
    if g.degrees[seed] == 0:
        single = np.array([seed], dtype=np.int64)
        return ApprVector(
            seed=seed,
            p_indices=single,
            p_values=np.ones(1, dtype=np.float64),
            r_indices=np.empty(0, dtype=np.int64),
            r_values=np.empty(0, dtype=np.float64),
        )

    nodes, p_values, r_values, work, pushes = _push_kernel(
        np.int64(seed), g.indptr, g.indices, float(cfg.alpha), float(cfg.epsilon)
    )
    assert (p_values >= 0).all() and (r_values >= 0).all(), "push produced negative mass"

    p_keep = p_values > 0
    r_keep = r_values > 0
    return ApprVector(
        seed=seed,
        p_indices=nodes[p_keep],
        p_values=p_values[p_keep],
        r_indices=nodes[r_keep],
        r_values=r_values[r_keep],
        work=float(work),
        pushes=int(pushes),
    )
