"""Checks on the public Cora files. Set LABELDIST_CORA_DIR to the directory holding cora.content and cora.cites."""
import os
import time

import numpy as np
import pytest

from labeldist.appr import ApprConfig, appr_all
from labeldist.datasets import load_content_cites, planetoid_split
from labeldist.evaluation import select_alpha
from labeldist.evaluation.experiment import DEFAULT_ALPHAS, ExperimentConfig, Method, run_experiment
from labeldist.features import adjacency_features

CORA_DIR = os.environ.get("LABELDIST_CORA_DIR", "")
CONTENT = os.path.join(CORA_DIR, "cora.content")
CITES = os.path.join(CORA_DIR, "cora.cites")

pytestmark = pytest.mark.skipif(
    not (CORA_DIR and os.path.exists(CONTENT) and os.path.exists(CITES)),
    reason="Cora files not found, set LABELDIST_CORA_DIR",
)


@pytest.fixture(scope="module")
def cora():
    return load_content_cites(CONTENT, CITES)


def test_cora_sizes(cora):
    assert cora.n == 2708
    assert cora.graph.num_edges == 5278
    assert cora.labels.num_labels == 7
    assert adjacency_features(cora.graph).nnz == 2 * 5278


def test_cora_planetoid_split(cora):
    split = planetoid_split(cora, seed=0)

    assert (len(split.train), len(split.val), len(split.test)) == (140, 500, 1000)


def test_cora_appr_matrix(cora):
    started = time.perf_counter()
    matrix = appr_all(cora.graph, ApprConfig(alpha=0.1, epsilon=1e-5))
    elapsed = time.perf_counter() - started

    assert matrix.n == 2708
    assert (np.asarray(matrix.rows.sum(axis=1)).ravel() <= 1.0 + 1e-12).all()
    assert elapsed < 10.0


def test_label_distribution_beats_adjacency_on_cora(cora):
    cfg = ExperimentConfig(threads=os.cpu_count() or 1)
    seeds = list(range(10))

    ld = run_experiment(cora, Method.LD, DEFAULT_ALPHAS, seeds, cfg)
    adj = run_experiment(cora, Method.ADJ, [], seeds, cfg)

    assert len(ld.rows) == 90
    assert np.mean([row.micro_f1 for row in ld.rows]) > np.mean([row.micro_f1 for row in adj.rows])
    assert select_alpha(ld, Method.LD.value) in (0.1, 0.2)
