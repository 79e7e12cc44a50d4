import asyncio
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from labeldist.appr.push import ApprConfig, approximate_ppr
from labeldist.errors import InputError
from labeldist.graph.csr import Graph

MAGIC = b"APPR1"


@dataclass(frozen=True)
class ApprMatrix:
    """Row i is the APPR solution p for seed i, stored as sorted sparse CSR rows."""

    rows: sp.csr_matrix
    config: ApprConfig

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def nnz(self) -> int:
        return int(self.rows.nnz)

    def row(self, i: int) -> Tuple[np.ndarray, np.ndarray]:
        start, end = self.rows.indptr[i], self.rows.indptr[i + 1]
        return self.rows.indices[start:end], self.rows.data[start:end]


def _compute_rows(g: Graph, seeds: Sequence[int], cfg: ApprConfig) -> List[Tuple[np.ndarray, np.ndarray]]:
    rows = []
    for seed in seeds:
        vector = approximate_ppr(g, int(seed), cfg)
        rows.append((vector.p_indices, vector.p_values))
    return rows


def _assemble(n: int, rows: List[Tuple[np.ndarray, np.ndarray]], cfg: ApprConfig) -> ApprMatrix:
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum([len(indices) for indices, _ in rows], out=indptr[1:])
    indices = np.concatenate([r[0] for r in rows]) if rows else np.empty(0, dtype=np.int64)
    data = np.concatenate([r[1] for r in rows]) if rows else np.empty(0, dtype=np.float64)
    matrix = sp.csr_matrix((data, indices, indptr), shape=(n, n))
    matrix.has_sorted_indices = True
    return ApprMatrix(rows=matrix, config=cfg)


async def appr_all_async(g: Graph, cfg: ApprConfig, parallelism: int = 1) -> ApprMatrix:
    """
    APPR rows for every node, computed on `parallelism` worker threads.

    Seeds are cut into contiguous chunks and rows are reassembled in seed
    order, so the result does not depend on the worker count.
    """
    if parallelism < 1:
        raise InputError(f"parallelism must be >= 1, got {parallelism}")

    chunks = [chunk for chunk in np.array_split(np.arange(g.n), parallelism) if chunk.size]
    results = await asyncio.gather(*(asyncio.to_thread(_compute_rows, g, chunk, cfg) for chunk in chunks))
    return _assemble(g.n, [row for chunk_rows in results for row in chunk_rows], cfg)


def appr_all(g: Graph, cfg: ApprConfig, parallelism: int = 1) -> ApprMatrix:
    if parallelism <= 1:
        return _assemble(g.n, _compute_rows(g, range(g.n), cfg), cfg)
    return asyncio.run(appr_all_async(g, cfg, parallelism))


def save_matrix(matrix: ApprMatrix, path) -> None:
    """
    Write the APPR1 binary format, little-endian throughout:
    magic, n (u64), alpha (f64), epsilon (f64), then per row
    count (u64), node ids (i64 * count), values (f64 * count).
    """
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(np.array([matrix.n], dtype="<u8").tobytes())
        f.write(np.array([matrix.config.alpha, matrix.config.epsilon], dtype="<f8").tobytes())
        for i in range(matrix.n):
            indices, values = matrix.row(i)
            f.write(np.array([len(indices)], dtype="<u8").tobytes())
            f.write(np.ascontiguousarray(indices, dtype="<i8").tobytes())
            f.write(np.ascontiguousarray(values, dtype="<f8").tobytes())


def load_matrix(path) -> ApprMatrix:
    with open(path, "rb") as f:
        payload = f.read()

    if not payload.startswith(MAGIC):
        raise InputError(f"{path} is not an APPR1 file")
    offset = len(MAGIC)

    def take(dtype: str, count: int) -> np.ndarray:
        nonlocal offset
        width = np.dtype(dtype).itemsize * count
        if offset + width > len(payload):
            raise InputError(f"{path} is truncated")
        chunk = np.frombuffer(payload, dtype=dtype, count=count, offset=offset)
        offset += width
        return chunk

    n = int(take("<u8", 1)[0])
    alpha, epsilon = take("<f8", 2)
    rows = []
    for _ in range(n):
        count = int(take("<u8", 1)[0])
        rows.append((take("<i8", count).astype(np.int64), take("<f8", count).astype(np.float64)))
    if offset != len(payload):
        raise InputError(f"{path} has trailing bytes")
    return _assemble(n, rows, ApprConfig(alpha=float(alpha), epsilon=float(epsilon)))
