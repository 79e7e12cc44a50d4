from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np

from labeldist.errors import InputError
from labeldist.features.labels import LabelMatrix, Task
from labeldist.graph.csr import Graph


@dataclass(frozen=True)
class Dataset:
    """
    Graph plus ground-truth labels.

    `node_ids[i]` is the external id of node i. `components` and
    `context_mask` are only set for datasets split by whole components: the
    context nodes are labeled nodes whose labels are always observed.
    """

    graph: Graph
    labels: LabelMatrix
    node_ids: List[str]
    label_names: List[str]
    task: Task
    components: Optional[np.ndarray] = None
    context_mask: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.labels.n != self.graph.n or len(self.node_ids) != self.graph.n:
            raise InputError("graph, labels and id map disagree on the node count")
        if len(set(self.node_ids)) != len(self.node_ids):
            raise InputError("external node ids must be unique")
        if self.labels.task != self.task:
            raise InputError(f"labels are {self.labels.task.value} but the dataset is {self.task.value}")
        if len(self.label_names) != self.labels.num_labels:
            raise InputError("label names do not match the label matrix width")
        if self.labels.num_labels == 0:
            raise InputError("dataset has no classes")

    @property
    def n(self) -> int:
        return self.graph.n

    def index_of(self, external_id: str) -> int:
        try:
            return self.node_ids.index(external_id)
        except ValueError:
            raise InputError(f"unknown node id {external_id!r}")

    def with_components(self, components: np.ndarray, context_mask: np.ndarray) -> "Dataset":
        components = np.asarray(components, dtype=np.int64)
        context_mask = np.asarray(context_mask, dtype=bool)
        if components.shape != (self.n,) or context_mask.shape != (self.n,):
            raise InputError("component and role arrays must have one entry per node")
        if not self.labels.labeled_mask[context_mask].all():
            raise InputError("context nodes must be labeled")
        return replace(self, components=components, context_mask=context_mask)
