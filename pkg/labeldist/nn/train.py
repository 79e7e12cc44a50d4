import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from labeldist.errors import InputError, NumericalError
from labeldist.evaluation.metrics import micro_f1
from labeldist.features.labels import LabelMatrix, Task
from labeldist.graph.csr import Graph
from labeldist.graph.normalize import sym_normalized_adjacency
from labeldist.nn.model import EmbAugmentedModel, Head, MlpModel, loss_and_grads, predict

logger = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    """Training hyperparameters. Defaults follow the usual one-hidden-layer GCN recipe."""

    model_config = ConfigDict(extra="forbid")

    learning_rate: float = Field(default=0.01, gt=0.0)
    l2_weight: float = Field(default=5e-4, ge=0.0)
    dropout_keep_prob: float = Field(default=0.5, gt=0.0, le=1.0)
    max_epochs: int = Field(default=200, ge=1)
    early_stop_patience: int = Field(default=10, ge=1)
    pos_weight: float = Field(default=10.0, ge=1.0)
    hidden: int = Field(default=16, ge=1)
    threshold: float = Field(default=0.5, gt=0.0, lt=1.0)
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    adam_eps: float = Field(default=1e-8, gt=0.0)
    rng_seed: int = 0


class Adam:
    """Adaptive-moment optimizer updating parameter arrays in place."""

    def __init__(self, params: Dict[str, np.ndarray], cfg: TrainConfig):
        self.params = params
        self.cfg = cfg
        self.m = {name: np.zeros_like(value) for name, value in params.items()}
        self.v = {name: np.zeros_like(value) for name, value in params.items()}
        self.t = 0

    def step(self, grads: Dict[str, np.ndarray]) -> None:
        self.t += 1
        cfg = self.cfg
        correction1 = 1.0 - cfg.beta1 ** self.t
        correction2 = 1.0 - cfg.beta2 ** self.t
        for name, value in self.params.items():
            g = grads[name]
            self.m[name] = cfg.beta1 * self.m[name] + (1.0 - cfg.beta1) * g
            self.v[name] = cfg.beta2 * self.v[name] + (1.0 - cfg.beta2) * g * g
            m_hat = self.m[name] / correction1
            v_hat = self.v[name] / correction2
            value -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float
    val_metric: float


@dataclass
class TrainingLog:
    records: List[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(r.epoch, r.train_loss, r.val_loss, r.val_metric) for r in self.records],
            columns=["epoch", "train_loss", "val_loss", "val_metric"],
        )

    def to_csv(self, path) -> None:
        self.to_frame().to_csv(path, index=False)


def _head_for(labels: LabelMatrix) -> Head:
    return Head.SOFTMAX if labels.task == Task.MULTICLASS else Head.SIGMOID


def _check_split(labels: LabelMatrix, split) -> None:
    if split.train_idx.size == 0:
        raise InputError("training set is empty")
    if not labels.labeled_mask[split.train_idx].all():
        raise InputError("every training node must be labeled")
    if split.val_idx.size and not labels.labeled_mask[split.val_idx].all():
        raise InputError("every validation node must be labeled")


def _fit(model, x, labels: LabelMatrix, split, cfg: TrainConfig, rng: np.random.Generator):
    train_idx, val_idx = split.train_idx, split.val_idx
    x_train, y_train = x[train_idx], labels.y[train_idx]
    x_val, y_val = x[val_idx], labels.y[val_idx]
    params = model.parameters()
    optimizer = Adam(params, cfg)
    log = TrainingLog()

    best_val = np.inf
    best_params = None
    stale = 0
    for epoch in range(1, cfg.max_epochs + 1):
        # dropout is active on the training pass only
        train_loss, grads = loss_and_grads(model, x_train, y_train, cfg, nodes=train_idx, rng=rng, train_mode=True)
        if not np.isfinite(train_loss):
            raise NumericalError(
                f"training loss became {train_loss} at epoch {epoch}; "
                f"check the learning rate ({cfg.learning_rate}) and the input features"
            )
        optimizer.step(grads)

        # No validation nodes: run every epoch and keep the last parameters
        if val_idx.size == 0:
            log.records.append(EpochRecord(epoch, train_loss, float("nan"), float("nan")))
            continue

        val_loss, _ = loss_and_grads(model, x_val, y_val, cfg, nodes=val_idx)
        val_pred = predict(model, x_val, cfg.threshold, nodes=val_idx)
        val_metric = micro_f1(val_pred, y_val, np.arange(val_idx.size))
        log.records.append(EpochRecord(epoch, train_loss, val_loss, val_metric))
        logger.debug(f"epoch {epoch}: train_loss={train_loss:.6f} val_loss={val_loss:.6f} val_f1={val_metric:.4f}")

        # strict improvement, ties keep the earlier epoch
        if val_loss < best_val:
            best_val = val_loss
            best_params = {name: value.copy() for name, value in params.items()}
            log.best_epoch = epoch
            stale = 0
        else:
            stale += 1
            if stale >= cfg.early_stop_patience:
                logger.debug(f"Early stopping at epoch {epoch}, best epoch {log.best_epoch}")
                break

    # Restore the best validation epoch
    if best_params is not None:
        for name, value in params.items():
            value[...] = best_params[name]
    else:
        log.best_epoch = len(log.records)
    return model, log


def train(features, labels: LabelMatrix, split, cfg: TrainConfig) -> Tuple[MlpModel, TrainingLog]:
    """
    Full-batch training of an MlpModel with early stopping on validation loss.

    Only the labels of `split.train` and `split.val` are read. The returned
    model carries the parameters of the best validation epoch.
    """
    _check_split(labels, split)
    x = getattr(features, "x", features)
    if x.shape[0] != labels.n:
        raise InputError(f"features have {x.shape[0]} rows but there are {labels.n} nodes")

    rng = np.random.default_rng(cfg.rng_seed)
    model = MlpModel.initialize(x.shape[1], cfg.hidden, labels.num_labels, _head_for(labels), rng)
    return _fit(model, x, labels, split, cfg, rng)


def train_emb_augmented(g: Graph, features, labels: LabelMatrix, split, cfg: TrainConfig,
                        emb_dim: int = 16) -> Tuple[EmbAugmentedModel, TrainingLog]:
    """Like `train`, with a jointly learned structural embedding of width `emb_dim`."""
    _check_split(labels, split)
    x = getattr(features, "x", features)
    if x.shape[0] != labels.n or g.n != labels.n:
        raise InputError("graph, features and labels must cover the same nodes")
    if emb_dim < 0:
        raise InputError(f"embedding dimension must be >= 0, got {emb_dim}")

    rng = np.random.default_rng(cfg.rng_seed)
    a_hat = sym_normalized_adjacency(g, add_self_loops=True)
    model = EmbAugmentedModel.initialize(
        x.shape[1], cfg.hidden, labels.num_labels, _head_for(labels), a_hat, emb_dim, rng
    )
    return _fit(model, x, labels, split, cfg, rng)
