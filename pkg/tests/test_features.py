import numpy as np
import pytest
import scipy.sparse as sp

from labeldist.appr import ApprConfig, appr_all
from labeldist.datasets.splits import SplitSpec
from labeldist.errors import InputError
from labeldist.features import (
    FeatureMatrix,
    LabelMatrix,
    Task,
    adjacency_features,
    build_label_distribution,
    label_conv_features,
    load_features,
    save_sparse_features,
    train_label_matrix,
)
from labeldist.graph import build_graph
from tests.conftest import random_connected_graphs


def _flip_class(labels: LabelMatrix, node: int) -> LabelMatrix:
    classes = labels.classes()
    classes[node] = (classes[node] + 1) % labels.num_labels
    return LabelMatrix.from_classes(classes, labels.num_labels)


def test_star_label_distribution(star):
    appr = appr_all(star, ApprConfig(alpha=0.3, epsilon=1e-9))
    labels = LabelMatrix.from_classes(np.array([-1, 0, 0, 1, -1]), 2)

    x = build_label_distribution(appr, labels).x

    z = appr.rows.toarray()
    np.testing.assert_allclose(x[0], [z[0, 1] + z[0, 2], z[0, 3]], rtol=1e-12)
    relabeled = LabelMatrix.from_classes(np.array([1, 0, 0, 1, -1]), 2)
    np.testing.assert_array_equal(build_label_distribution(appr, relabeled).x[0], x[0])


def test_own_label_is_invisible_without_labeled_neighbors(path3):
    appr = appr_all(path3, ApprConfig(alpha=0.2, epsilon=1e-6))
    labels = LabelMatrix.from_classes(np.array([-1, 1, -1]), 2)

    x = build_label_distribution(appr, labels).x

    assert not x[1].any()
    assert x[0, 1] > 0 and x[2, 1] > 0


def test_flipping_a_label_leaves_its_own_row_untouched():
    rng = np.random.default_rng(4)
    graphs = random_connected_graphs(100, max_nodes=10, seed=9)
    for g in graphs:
        classes = rng.integers(-1, 3, size=g.n)
        labels = LabelMatrix.from_classes(classes, 3)
        appr = appr_all(g, ApprConfig(alpha=float(rng.choice([0.1, 0.5])), epsilon=1e-5))
        v = int(rng.integers(g.n))
        if classes[v] < 0:
            classes[v] = 0
            labels = LabelMatrix.from_classes(classes, 3)
        flipped = _flip_class(labels, v)

        np.testing.assert_array_equal(
            build_label_distribution(appr, labels).x[v], build_label_distribution(appr, flipped).x[v]
        )
        np.testing.assert_array_equal(label_conv_features(g, labels).x[v], label_conv_features(g, flipped).x[v])


def test_sparse_product_matches_dense_product():
    rng = np.random.default_rng(12)
    for g in random_connected_graphs(50, max_nodes=30, seed=13):
        labels = LabelMatrix.from_classes(rng.integers(-1, 4, size=g.n), 4)
        appr = appr_all(g, ApprConfig(alpha=float(rng.uniform(0.05, 0.9)), epsilon=1e-5))

        dense = appr.rows.toarray()
        np.fill_diagonal(dense, 0.0)
        expected = dense @ labels.y.astype(np.float64)

        np.testing.assert_allclose(build_label_distribution(appr, labels).x, expected, rtol=0, atol=1e-12)


def test_multiclass_rows_are_bounded_by_off_diagonal_mass():
    rng = np.random.default_rng(14)
    for g in random_connected_graphs(50, max_nodes=30, seed=15):
        labels = LabelMatrix.from_classes(rng.integers(-1, 3, size=g.n), 3)
        appr = appr_all(g, ApprConfig(alpha=float(rng.uniform(0.05, 0.9)), epsilon=1e-5))

        dense = appr.rows.toarray()
        off_diagonal = dense.sum(axis=1) - np.diag(dense)
        row_sums = build_label_distribution(appr, labels).x.sum(axis=1)

        assert (row_sums <= off_diagonal + 1e-12).all()
        assert (off_diagonal <= 1.0 + 1e-12).all()


def test_label_distribution_rejects_size_mismatch(triangle, path3):
    appr = appr_all(triangle, ApprConfig(alpha=0.5, epsilon=1e-4))

    with pytest.raises(InputError):
        build_label_distribution(appr, LabelMatrix.from_classes(np.array([0, 1]), 2))
    with pytest.raises(InputError):
        label_conv_features(path3, LabelMatrix.from_classes(np.array([0, 1]), 2))


def test_adjacency_features():
    features = adjacency_features(build_graph([(0, 1)], 3))

    assert sp.issparse(features)
    np.testing.assert_array_equal(features.toarray()[0], [0, 1, 0])
    assert not features.toarray()[2].any()


def test_label_conv_two_nodes():
    g = build_graph([(0, 1)], 2)

    x = label_conv_features(g, LabelMatrix.from_classes(np.array([-1, 0]), 1)).x

    np.testing.assert_allclose(x, [[1.0], [0.0]])


def test_label_conv_without_labels_is_zero(triangle):
    empty = LabelMatrix.from_classes(np.array([-1, -1, -1]), 2)

    assert not label_conv_features(triangle, empty).x.any()


def test_train_label_matrix_keeps_train_and_context_only():
    labels = LabelMatrix.from_classes(np.array([0, 1, 0, 1, 0]), 2)
    split = SplitSpec(seed=0, train=[0], val=[1], test=[2], context=[3])

    observed = train_label_matrix(labels, split)

    assert observed.labeled_nodes.tolist() == [0, 3]
    assert not observed.y[[1, 2, 4]].any()
    with pytest.raises(InputError, match="empty training set"):
        train_label_matrix(labels, SplitSpec(seed=0, train=[], val=[1], test=[2]))


def test_label_matrix_validation():
    with pytest.raises(InputError, match="one-hot"):
        LabelMatrix(y=np.array([[1, 1]], dtype=np.uint8), labeled_mask=np.array([True]))
    with pytest.raises(InputError, match="at least one positive"):
        LabelMatrix(y=np.array([[0, 0]], dtype=np.uint8), labeled_mask=np.array([True]), task=Task.MULTILABEL)
    with pytest.raises(InputError, match="all-zero"):
        LabelMatrix(y=np.array([[1, 0]], dtype=np.uint8), labeled_mask=np.array([False]))


def test_feature_dumps_load_back(tmp_path):
    dense = FeatureMatrix(x=np.array([[0.1, 1.0 / 3.0], [2.5e-17, 0.0]]))
    dense.save_text(tmp_path / "x.txt")
    save_sparse_features(adjacency_features(build_graph([(0, 2)], 3)), tmp_path / "adj.mtx")

    np.testing.assert_array_equal(load_features(tmp_path / "x.txt"), dense.x)
    loaded_adj = load_features(tmp_path / "adj.mtx")
    assert sp.issparse(loaded_adj)
    np.testing.assert_array_equal(loaded_adj.toarray(), [[0, 0, 1], [0, 0, 0], [1, 0, 0]])
