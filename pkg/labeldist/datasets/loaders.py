import logging
from collections import Counter
from typing import Dict, List, Tuple

import numpy as np

from labeldist.datasets.dataset import Dataset
from labeldist.errors import InputError, ParseError
from labeldist.features.labels import LabelMatrix, Task
from labeldist.graph.csr import Graph, build_graph

logger = logging.getLogger(__name__)


class _IdMap:
    """External string ids -> dense ids in first-appearance order."""

    def __init__(self):
        self.ids: List[str] = []
        self.index: Dict[str, int] = {}

    def add(self, external_id: str) -> int:
        if external_id not in self.index:
            self.index[external_id] = len(self.ids)
            self.ids.append(external_id)
        return self.index[external_id]


def _read_lines(path) -> List[Tuple[int, str]]:
    try:
        with open(path, encoding="utf-8") as f:
            return [(number, line.strip()) for number, line in enumerate(f, start=1) if line.strip()]
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")


def _read_edges(path, ids: _IdMap) -> List[Tuple[int, int]]:
    edges = []
    for number, line in _read_lines(path):
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(path, number, "expected '<src> <dst>'")
        edges.append((ids.add(tokens[0]), ids.add(tokens[1])))
    return edges


def load_edge_list(path) -> Tuple[Graph, List[str]]:
    """
    Load an unlabeled `<src> <dst>` edge file.

    Returns:
        the graph and its external node ids, numbered in first-appearance order
    """
    ids = _IdMap()
    edges = _read_edges(path, ids)
    if not ids.ids:
        raise InputError(f"{path} defines no edges")
    graph = build_graph(edges, len(ids.ids))
    logger.info(f"Loaded {graph.n} nodes, {graph.num_edges} edges from {path}")
    return graph, ids.ids


def load_content_cites(content_path, cites_path) -> Dataset:
    """
    Load a Cora-style citation dataset.

    Content lines are `<id> <attr>... <class>`; attributes are ignored. Cite
    lines are `<cited_id> <citing_id>` and become undirected edges. Cites that
    name an id missing from the content file are skipped and counted.

    Args:
        content_path: path of the .content file
        cites_path: path of the .cites file

    Returns:
        Multiclass Dataset
    """
    ids = _IdMap()
    classes: List[int] = []
    label_names: List[str] = []
    label_index: Dict[str, int] = {}

    for number, line in _read_lines(content_path):
        tokens = line.split()
        if len(tokens) < 2:
            raise ParseError(content_path, number, "expected '<id> [attributes...] <class>'")
        if tokens[0] in ids.index:
            raise ParseError(content_path, number, f"duplicate node id {tokens[0]!r}")
        ids.add(tokens[0])
        if tokens[-1] not in label_index:
            label_index[tokens[-1]] = len(label_names)
            label_names.append(tokens[-1])
        classes.append(label_index[tokens[-1]])

    edges = []
    skipped = 0
    for number, line in _read_lines(cites_path):
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(cites_path, number, "expected '<cited_id> <citing_id>'")
        cited, citing = tokens
        if cited not in ids.index or citing not in ids.index:
            skipped += 1
            continue
        edges.append((ids.index[cited], ids.index[citing]))
    if skipped:
        logger.warning(f"Skipped {skipped} cite lines referencing unknown ids in {cites_path}")

    graph = build_graph(edges, len(ids.ids))
    labels = LabelMatrix.from_classes(np.asarray(classes, dtype=np.int64), len(label_names))
    logger.info(f"Loaded {graph.n} nodes, {graph.num_edges} edges, {len(label_names)} classes from {content_path}")
    return Dataset(graph=graph, labels=labels, node_ids=ids.ids, label_names=label_names, task=Task.MULTICLASS)


def load_edge_label_tsv(edges_path, labels_path, task: Task) -> Dataset:
    """
    Load `<src> <dst>` edge lines and `<id> <label>[,<label>...]` label lines.

    Ids are numbered in first-appearance order of the labels file, then of
    the edges file. Nodes without a label line stay unlabeled; every new label
    string gets the next label index.
    """
    task = Task(task)
    ids = _IdMap()
    label_names: List[str] = []
    label_index: Dict[str, int] = {}
    node_labels: Dict[int, List[int]] = {}

    for number, line in _read_lines(labels_path):
        tokens = line.split(None, 1)
        if len(tokens) != 2:
            raise ParseError(labels_path, number, "expected '<id> <label>[,<label>...]'")
        node = ids.add(tokens[0])
        if node in node_labels:
            raise ParseError(labels_path, number, f"duplicate label line for {tokens[0]!r}")
        names = [name.strip() for name in tokens[1].split(",") if name.strip()]
        if not names:
            raise ParseError(labels_path, number, "empty label list")
        if task == Task.MULTICLASS and len(names) > 1:
            raise ParseError(labels_path, number, "multiclass nodes take exactly one label")
        for name in names:
            if name not in label_index:
                label_index[name] = len(label_names)
                label_names.append(name)
        node_labels[node] = sorted({label_index[name] for name in names})

    edges = _read_edges(edges_path, ids)

    if not label_names:
        raise InputError(f"{labels_path} defines no labels")

    n = len(ids.ids)
    y = np.zeros((n, len(label_names)), dtype=np.uint8)
    labeled = np.zeros(n, dtype=bool)
    for node, indices in node_labels.items():
        y[node, indices] = 1
        labeled[node] = True

    graph = build_graph(edges, n)
    logger.info(
        f"Loaded {n} nodes ({int(labeled.sum())} labeled), {graph.num_edges} edges, "
        f"{len(label_names)} labels from {edges_path}"
    )
    return Dataset(
        graph=graph,
        labels=LabelMatrix(y=y, labeled_mask=labeled, task=task),
        node_ids=ids.ids,
        label_names=label_names,
        task=task,
    )


def load_components(path, ds: Dataset) -> Dataset:
    """Attach `<id> <component> <context|target>` lines to an already loaded dataset."""
    components = np.full(ds.n, -1, dtype=np.int64)
    context = np.zeros(ds.n, dtype=bool)
    index = {external_id: i for i, external_id in enumerate(ds.node_ids)}

    for number, line in _read_lines(path):
        tokens = line.split()
        if len(tokens) != 3 or tokens[2] not in ("context", "target"):
            raise ParseError(path, number, "expected '<id> <component> <context|target>'")
        if tokens[0] not in index:
            raise ParseError(path, number, f"unknown node id {tokens[0]!r}")
        try:
            components[index[tokens[0]]] = int(tokens[1])
        except ValueError:
            raise ParseError(path, number, f"component must be an integer, got {tokens[1]!r}")
        context[index[tokens[0]]] = tokens[2] == "context"

    if (components < 0).any():
        raise InputError(f"{path} does not assign a component to every node")
    counts = Counter(components.tolist())
    logger.info(f"Loaded {len(counts)} components from {path}")
    return ds.with_components(components, context)


def write_edge_label_tsv(ds: Dataset, edges_path, labels_path) -> None:
    """Inverse of load_edge_label_tsv: labels in node order, then edges with i < j."""
    with open(labels_path, "w", encoding="utf-8") as f:
        for node in range(ds.n):
            if not ds.labels.labeled_mask[node]:
                continue
            names = [ds.label_names[j] for j in np.flatnonzero(ds.labels.y[node])]
            f.write(f"{ds.node_ids[node]}\t{','.join(names)}\n")

    g = ds.graph
    with open(edges_path, "w", encoding="utf-8") as f:
        for u in range(g.n):
            for v in g.indices[g.indptr[u]:g.indptr[u + 1]]:
                if u < v:
                    f.write(f"{ds.node_ids[u]}\t{ds.node_ids[v]}\n")


def write_components(ds: Dataset, path) -> None:
    if ds.components is None:
        raise InputError("dataset has no component structure")
    with open(path, "w", encoding="utf-8") as f:
        for node in range(ds.n):
            role = "context" if ds.context_mask[node] else "target"
            f.write(f"{ds.node_ids[node]}\t{ds.components[node]}\t{role}\n")
