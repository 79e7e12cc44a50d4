import logging
from dataclasses import dataclass

import numpy as np
import scipy.io
import scipy.sparse as sp

from labeldist.appr.matrix import ApprMatrix
from labeldist.errors import InputError, ParseError
from labeldist.features.labels import LabelMatrix
from labeldist.graph.csr import Graph
from labeldist.graph.normalize import sym_normalized_adjacency

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureMatrix:
    """Dense n x l matrix of label mass per node."""

    x: np.ndarray

    @property
    def shape(self):
        return self.x.shape

    def save_text(self, path) -> None:
        rows, cols = self.x.shape
        with open(path, "w") as f:
            f.write(f"{rows} {cols}\n")
            for row in self.x:
                f.write(" ".join(f"{value:.17g}" for value in row) + "\n")

    @classmethod
    def load_text(cls, path) -> "FeatureMatrix":
        with open(path) as f:
            lines = f.read().splitlines()
        if not lines:
            raise ParseError(path, 1, "empty feature file")
        try:
            rows, cols = (int(token) for token in lines[0].split())
        except ValueError:
            raise ParseError(path, 1, "expected '<rows> <cols>' header")
        if len(lines) - 1 != rows:
            raise ParseError(path, len(lines), f"expected {rows} rows, found {len(lines) - 1}")

        x = np.zeros((rows, cols), dtype=np.float64)
        for i, line in enumerate(lines[1:]):
            tokens = line.split()
            if len(tokens) != cols:
                raise ParseError(path, i + 2, f"expected {cols} values, found {len(tokens)}")
            x[i] = [float(token) for token in tokens]
        return cls(x=x)


def _without_diagonal(matrix: sp.csr_matrix) -> sp.csr_matrix:
    coo = matrix.tocoo()
    keep = coo.row != coo.col
    stripped = sp.csr_matrix((coo.data[keep], (coo.row[keep], coo.col[keep])), shape=matrix.shape)
    stripped.sort_indices()
    return stripped


def build_label_distribution(appr: ApprMatrix, labels: LabelMatrix) -> FeatureMatrix:
    """
    Local label distribution X = Z Y_train, Z the APPR matrix with its diagonal removed.

    X[v, j] is the probability that a walk from v stops at another node
    labeled j. Rows are not renormalized after removing the diagonal.
    """
    if appr.n != labels.n:
        raise InputError(f"APPR matrix has {appr.n} rows but the label matrix has {labels.n}")
    z = _without_diagonal(appr.rows)
    x = np.asarray(z @ labels.y.astype(np.float64))
    return FeatureMatrix(x=x)


def adjacency_features(g: Graph) -> sp.csr_matrix:
    """Binary adjacency rows as sparse features, no self entries."""
    return g.adjacency()


def label_conv_features(g: Graph, labels: LabelMatrix) -> FeatureMatrix:
    """One propagation step of Y_train over the normalized adjacency without self-loops."""
    if g.n != labels.n:
        raise InputError(f"graph has {g.n} nodes but the label matrix has {labels.n}")
    a_hat = sym_normalized_adjacency(g, add_self_loops=False)
    return FeatureMatrix(x=np.asarray(a_hat @ labels.y.astype(np.float64)))


def save_sparse_features(features: sp.spmatrix, path) -> None:
    with open(path, "wb") as f:
        scipy.io.mmwrite(f, sp.coo_matrix(features), precision=17)


def load_features(path):
    """Dense text dump or Matrix Market file, decided by the first line."""
    with open(path) as f:
        first = f.readline()
    if first.startswith("%%MatrixMarket"):
        return sp.csr_matrix(scipy.io.mmread(path))
    return FeatureMatrix.load_text(path).x
