from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable

import numpy as np

from labeldist.errors import InputError

if TYPE_CHECKING:
    from labeldist.datasets.splits import SplitSpec


class Task(str, Enum):
    MULTICLASS = "multiclass"
    MULTILABEL = "multilabel"


@dataclass(frozen=True)
class LabelMatrix:
    """
    n x l binary label matrix with the set of labeled nodes.

    Unlabeled rows are zero. In multiclass mode every labeled row is one-hot,
    in multilabel mode it has at least one positive.
    """

    y: np.ndarray
    labeled_mask: np.ndarray
    task: Task = Task.MULTICLASS

    def __post_init__(self):
        if self.y.ndim != 2 or self.labeled_mask.shape != (self.y.shape[0],):
            raise InputError(f"label matrix shape {self.y.shape} does not match mask {self.labeled_mask.shape}")
        if not np.isin(self.y, (0, 1)).all():
            raise InputError("label matrix must be binary")

        row_sums = self.y.sum(axis=1)
        if (row_sums[~self.labeled_mask] != 0).any():
            raise InputError("unlabeled nodes must have all-zero label rows")
        labeled_sums = row_sums[self.labeled_mask]
        if self.task == Task.MULTICLASS and (labeled_sums != 1).any():
            raise InputError("multiclass labels must be one-hot")
        if self.task == Task.MULTILABEL and (labeled_sums < 1).any():
            raise InputError("multilabel rows need at least one positive label")

        self.y.setflags(write=False)
        self.labeled_mask.setflags(write=False)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def num_labels(self) -> int:
        return self.y.shape[1]

    @property
    def labeled_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.labeled_mask)

    def classes(self) -> np.ndarray:
        """Class index per node for multiclass labels, -1 for unlabeled nodes."""
        out = np.full(self.n, -1, dtype=np.int64)
        out[self.labeled_mask] = self.y[self.labeled_mask].argmax(axis=1)
        return out

    def restrict(self, nodes: Iterable[int]) -> "LabelMatrix":
        """Copy keeping only the labels of `nodes`; every other row becomes unlabeled."""
        nodes = np.asarray(list(nodes), dtype=np.int64)
        keep = np.zeros(self.n, dtype=bool)
        keep[nodes] = True
        keep &= self.labeled_mask
        y = np.where(keep[:, None], self.y, 0).astype(self.y.dtype)
        return LabelMatrix(y=y, labeled_mask=keep, task=self.task)

    @classmethod
    def from_classes(cls, classes: np.ndarray, num_labels: int) -> "LabelMatrix":
        classes = np.asarray(classes, dtype=np.int64)
        labeled = classes >= 0
        y = np.zeros((classes.shape[0], num_labels), dtype=np.uint8)
        y[np.flatnonzero(labeled), classes[labeled]] = 1
        return cls(y=y, labeled_mask=labeled, task=Task.MULTICLASS)


def train_label_matrix(labels: LabelMatrix, split: "SplitSpec") -> LabelMatrix:
    """Y_train: labels of the context nodes of `split` and, unless the split hides them, of its training nodes."""
    if split.train_idx.size == 0:
        raise InputError("split has an empty training set, there are no labels to distribute")
    observed = split.context_idx
    if split.observe_train:
        observed = np.concatenate([split.train_idx, observed])
    if observed.size == 0:
        raise InputError("split observes no labels")
    if not labels.labeled_mask[observed].all():
        raise InputError("every training and context node must be labeled")
    return labels.restrict(observed)
