import logging
import os
import time
from typing import Dict, Optional, Tuple

from labeldist.appr.matrix import ApprMatrix, appr_all_async, load_matrix, save_matrix
from labeldist.appr.push import ApprConfig
from labeldist.graph.csr import Graph


class ApprService:
    """Computes APPR matrices and keeps them in memory and, optionally, on disk."""

    def __init__(self, cache_dir: Optional[str] = None, parallelism: int = 1):
        """
        Initialize the APPR service.

        Args:
            cache_dir: Directory for cached APPR1 files, None disables the disk cache
            parallelism: Worker threads per matrix
        """
        self.cache_dir = cache_dir
        self.parallelism = parallelism
        self.logger = logging.getLogger(__name__)
        self.matrix_cache: Dict[Tuple[str, float, float], ApprMatrix] = {}

    def cache_path(self, g: Graph, cfg: ApprConfig) -> Optional[str]:
        if not self.cache_dir:
            return None
        return os.path.join(self.cache_dir, f"{g.content_hash()[:16]}_a{cfg.alpha!r}_e{cfg.epsilon!r}.appr")

    async def load_or_compute(self, g: Graph, cfg: ApprConfig) -> ApprMatrix:
        key = (g.content_hash(), cfg.alpha, cfg.epsilon)
        if key in self.matrix_cache:
            return self.matrix_cache[key]

        path = self.cache_path(g, cfg)
        if path and os.path.exists(path):
            matrix = load_matrix(path)
            self.logger.info(f"Loaded APPR matrix for alpha={cfg.alpha} from {path}")
        else:
            started = time.perf_counter()
            matrix = await appr_all_async(g, cfg, self.parallelism)
            elapsed = time.perf_counter() - started
            self.logger.info(
                f"Computed APPR matrix: n={matrix.n}, nnz={matrix.nnz}, alpha={cfg.alpha}, "
                f"epsilon={cfg.epsilon}, {elapsed:.2f}s"
            )
            if path:
                os.makedirs(self.cache_dir, exist_ok=True)
                save_matrix(matrix, path)

        self.matrix_cache[key] = matrix
        return matrix
