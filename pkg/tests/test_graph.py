import numpy as np
import pytest

from labeldist.errors import InputError
from labeldist.graph import build_graph, edges_of, neighbors, sym_normalized_adjacency
from tests.conftest import random_connected_graphs


def test_build_graph_collapses_duplicates_and_self_links():
    g = build_graph([(0, 1), (1, 0), (2, 2)], 3)

    assert g.num_edges == 1
    assert edges_of(g) == [(0, 1)]
    assert g.degrees.tolist() == [1, 1, 0]


def test_build_graph_single_node_without_edges():
    g = build_graph([], 1)

    assert g.n == 1
    assert g.num_edges == 0
    assert g.degrees.tolist() == [0]


def test_build_graph_rejects_out_of_range_endpoint():
    with pytest.raises(InputError, match=r"\(1, 5\)"):
        build_graph([(0, 1), (1, 5)], 3)


def test_build_graph_rows_are_sorted_and_symmetric():
    g = build_graph([(3, 0), (0, 2), (2, 1), (1, 3), (0, 1)], 4)

    for u in range(g.n):
        row = neighbors(g, u)
        assert row == sorted(set(row))
        assert all(u in neighbors(g, v) for v in row)
    assert g == build_graph(edges_of(g), 4)


def test_graph_arrays_are_read_only(triangle):
    with pytest.raises(ValueError):
        triangle.indices[0] = 2


def test_neighbors(triangle, path3):
    assert neighbors(triangle, 0) == [1, 2]
    assert neighbors(path3, 1) == [0, 2]
    assert neighbors(build_graph([], 2), 1) == []
    with pytest.raises(InputError):
        neighbors(triangle, 3)


def test_content_hash_tracks_structure(triangle, path3):
    assert triangle.content_hash() == build_graph([(2, 1), (0, 2), (1, 0)], 3).content_hash()
    assert triangle.content_hash() != path3.content_hash()


def test_sym_normalized_single_edge():
    g = build_graph([(0, 1)], 2)

    plain = sym_normalized_adjacency(g).toarray()
    with_loops = sym_normalized_adjacency(g, add_self_loops=True).toarray()

    np.testing.assert_allclose(plain, [[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(with_loops, np.full((2, 2), 0.5))


def test_sym_normalized_isolated_row_is_zero():
    g = build_graph([(0, 1)], 3)

    normalized = sym_normalized_adjacency(g).toarray()

    assert not normalized[2].any()
    np.testing.assert_allclose(normalized, normalized.T)


def test_sym_normalized_entries_on_random_graphs():
    for g in random_connected_graphs(30, max_nodes=50, seed=21):
        degrees = g.degrees.astype(np.float64)
        normalized = sym_normalized_adjacency(g).toarray()

        expected = np.zeros((g.n, g.n))
        for i, j in edges_of(g):
            expected[i, j] = expected[j, i] = 1.0 / np.sqrt(degrees[i] * degrees[j])
        np.testing.assert_allclose(normalized, expected, rtol=1e-12, atol=0)


def test_neighbors_never_contain_the_node_itself():
    for g in random_connected_graphs(30, max_nodes=50, seed=22):
        for u in range(g.n):
            row = neighbors(g, u)
            assert u not in row
            assert row == sorted(set(row))


def test_rebuilding_from_edges_gives_the_same_graph():
    for g in random_connected_graphs(30, max_nodes=50, seed=23):
        assert build_graph(edges_of(g), g.n) == g
