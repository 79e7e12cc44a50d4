import numpy as np
import pytest
from pydantic import ValidationError

from labeldist.datasets import (
    Dataset,
    component_split,
    load_components,
    load_content_cites,
    load_edge_label_tsv,
    load_edge_list,
    load_split,
    make_multilabel_synthetic,
    make_network_synthetic,
    planetoid_split,
    ratio_split,
    save_split,
    write_components,
    write_edge_label_tsv,
)
from labeldist.datasets.splits import SplitSpec
from labeldist.datasets.synthetic import DATABASE, NETWORK_ROLES, PRINTER, SERVER, USER
from labeldist.errors import InputError, ParseError
from labeldist.features import LabelMatrix, Task, adjacency_features
from labeldist.graph import build_graph, neighbors
from tests.conftest import fixture_path


def _labeled_only(n: int, task: Task = Task.MULTILABEL) -> Dataset:
    y = np.ones((n, 1), dtype=np.uint8)
    return Dataset(
        graph=build_graph([], n),
        labels=LabelMatrix(y=y, labeled_mask=np.ones(n, dtype=bool), task=task),
        node_ids=[str(i) for i in range(n)],
        label_names=["x"],
        task=task,
    )


def test_load_toy_citation_files():
    ds = load_content_cites(fixture_path("toy.content"), fixture_path("toy.cites"))

    assert ds.n == 3
    assert ds.graph.num_edges == 1
    assert ds.label_names == ["Neural_Networks", "Theory"]
    assert ds.labels.classes().tolist() == [0, 1, 0]
    assert neighbors(ds.graph, ds.index_of("p1")) == [ds.index_of("p2")]


def test_load_multilabel_tsv(tmp_path):
    (tmp_path / "e.tsv").write_text("0\t1\n")
    (tmp_path / "l.tsv").write_text("0\tA\n1\tA,B\n")

    ds = load_edge_label_tsv(tmp_path / "e.tsv", tmp_path / "l.tsv", Task.MULTILABEL)

    assert ds.labels.num_labels == 2
    assert ds.labels.y.tolist() == [[1, 0], [1, 1]]


def test_unlabeled_nodes_and_new_label_strings(tmp_path):
    (tmp_path / "e.tsv").write_text("a\tb\nb\tc\n")
    (tmp_path / "l.tsv").write_text("a\tX\nc\tY\n")

    ds = load_edge_label_tsv(tmp_path / "e.tsv", tmp_path / "l.tsv", Task.MULTICLASS)

    assert ds.node_ids == ["a", "c", "b"]
    assert ds.labels.labeled_mask.tolist() == [True, True, False]
    assert ds.label_names == ["X", "Y"]


def test_empty_labels_file_is_rejected(tmp_path):
    (tmp_path / "e.tsv").write_text("0\t1\n")
    (tmp_path / "l.tsv").write_text("")

    with pytest.raises(InputError, match="no labels"):
        load_edge_label_tsv(tmp_path / "e.tsv", tmp_path / "l.tsv", Task.MULTICLASS)


def test_load_unlabeled_edge_list(tmp_path):
    (tmp_path / "e.tsv").write_text("a\tb\nb\tc\nc\ta\nb\ta\n\nd\td\n")

    graph, ids = load_edge_list(tmp_path / "e.tsv")

    assert ids == ["a", "b", "c", "d"]
    assert graph.num_edges == 3
    assert graph.degrees.tolist() == [2, 2, 2, 0]

    (tmp_path / "empty.tsv").write_text("")
    with pytest.raises(InputError, match="no edges"):
        load_edge_list(tmp_path / "empty.tsv")


def test_malformed_line_reports_its_number(tmp_path):
    (tmp_path / "e.tsv").write_text("0\t1\n1\t2\t3\n")
    (tmp_path / "l.tsv").write_text("0\tA\n")

    with pytest.raises(ParseError) as excinfo:
        load_edge_label_tsv(tmp_path / "e.tsv", tmp_path / "l.tsv", Task.MULTICLASS)
    assert excinfo.value.line_number == 2


def test_missing_file_names_the_path(tmp_path):
    with pytest.raises(InputError, match="nope.content"):
        load_content_cites(tmp_path / "nope.content", fixture_path("toy.cites"))


def test_loaders_are_pure():
    first = load_content_cites(fixture_path("toy.content"), fixture_path("toy.cites"))
    second = load_content_cites(fixture_path("toy.content"), fixture_path("toy.cites"))

    assert first.graph == second.graph
    assert np.array_equal(first.labels.y, second.labels.y)
    assert first.node_ids == second.node_ids


def test_planetoid_split(network_dataset):
    split = planetoid_split(network_dataset, per_class=20, n_val=100, n_test=200, seed=4)

    classes = network_dataset.labels.classes()
    assert np.bincount(classes[split.train_idx], minlength=4).tolist() == [20, 20, 20, 20]
    assert (len(split.val), len(split.test)) == (100, 200)
    assert split == planetoid_split(network_dataset, per_class=20, n_val=100, n_test=200, seed=4)
    assert split != planetoid_split(network_dataset, per_class=20, n_val=100, n_test=200, seed=5)


def test_planetoid_split_names_the_small_class(network_dataset):
    with pytest.raises(InputError, match="server"):
        planetoid_split(network_dataset, per_class=81, n_val=0, n_test=1)


def test_ratio_split_sizes():
    split = ratio_split(_labeled_only(10), seed=1)
    assert (len(split.train), len(split.val), len(split.test)) == (7, 1, 2)
    assert sorted(split.train + split.val + split.test) == list(range(10))

    large = ratio_split(_labeled_only(32732), seed=0)
    assert (len(large.train), len(large.val), len(large.test)) == (22912, 3273, 6547)


def test_ratio_split_rejects_bad_fractions():
    with pytest.raises(InputError):
        ratio_split(_labeled_only(10), 0.5, 0.1, 0.1)


def test_split_spec_must_be_disjoint():
    with pytest.raises(ValidationError):
        SplitSpec(seed=0, train=[1, 2], val=[2], test=[3])


def test_split_must_fit_dataset(network_dataset):
    with pytest.raises(InputError):
        SplitSpec(seed=0, train=[0], val=[], test=[network_dataset.n]).check_against(network_dataset)


def test_split_file_round_trip(tmp_path, network_dataset):
    split = component_split(network_dataset, seed=2)

    save_split(split, tmp_path / "split.json")

    assert load_split(tmp_path / "split.json") == split


def test_component_split(network_dataset):
    ds = network_dataset
    split = component_split(ds, seed=0)

    test_components = set(ds.components[split.test_idx].tolist())
    val_components = set(ds.components[split.val_idx].tolist())
    train_components = set(ds.components[split.train_idx].tolist())
    assert len(test_components) == 2 and len(val_components) == 1 and len(train_components) == 7
    assert not split.observe_train
    classes = ds.labels.classes()
    assert set(classes[split.context_idx].tolist()) == {USER, SERVER}
    assert set(classes[split.test_idx].tolist()) == {PRINTER, DATABASE}
    assert len(split.context) + len(split.train) + len(split.val) + len(split.test) == ds.n


def test_network_synthetic_structure():
    ds = make_network_synthetic(num_components=2, seed=0)
    classes = ds.labels.classes()
    degrees = ds.graph.degrees

    assert ds.label_names == NETWORK_ROLES
    devices = np.flatnonzero((classes == PRINTER) | (classes == DATABASE))
    assert set(degrees[devices].tolist()) == {2}
    assert set(degrees[(classes == USER) | (classes == SERVER)].tolist()) == {3}

    for device in devices:
        around = sorted(classes[neighbors(ds.graph, device)].tolist())
        expected = [USER, USER] if classes[device] == PRINTER else [USER, SERVER]
        assert around == sorted(expected)


def test_network_synthetic_components_do_not_share_adjacency_support(network_dataset):
    split = component_split(network_dataset, seed=3)
    adjacency = adjacency_features(network_dataset.graph)

    train_support = set(adjacency[split.train_idx].indices.tolist())
    test_support = set(adjacency[split.test_idx].indices.tolist())

    assert not train_support & test_support


def test_network_synthetic_is_seeded():
    assert make_network_synthetic(3, seed=9).graph == make_network_synthetic(3, seed=9).graph
    with pytest.raises(InputError):
        make_network_synthetic(1, seed=0)


def test_multilabel_synthetic():
    ds = make_multilabel_synthetic(n_communities=4, community_size=10, seed=1)

    assert ds.task == Task.MULTILABEL
    assert (ds.labels.y.sum(axis=1) == 2).all()


def test_synthetic_files_load_back(tmp_path):
    ds = make_network_synthetic(num_components=3, seed=5)
    write_edge_label_tsv(ds, tmp_path / "s.edges.tsv", tmp_path / "s.labels.tsv")
    write_components(ds, tmp_path / "s.components.tsv")

    loaded = load_edge_label_tsv(tmp_path / "s.edges.tsv", tmp_path / "s.labels.tsv", Task.MULTICLASS)
    loaded = load_components(tmp_path / "s.components.tsv", loaded)

    assert loaded.graph == ds.graph
    assert np.array_equal(loaded.labels.y, ds.labels.y)
    assert np.array_equal(loaded.components, ds.components)
    assert np.array_equal(loaded.context_mask, ds.context_mask)
