from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.special import expit, softmax

CLAMP = 1e-12


class Head(str, Enum):
    SOFTMAX = "softmax"
    SIGMOID = "sigmoid"


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out)) if fan_in + fan_out else 0.0
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


@dataclass
class MlpModel:
    """Input -> ReLU hidden layer -> softmax or sigmoid output."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    head: Head = Head.SOFTMAX

    @classmethod
    def initialize(cls, in_dim: int, hidden: int, out_dim: int, head: Head, rng: np.random.Generator) -> "MlpModel":
        w1 = glorot(rng, in_dim, hidden)
        w2 = glorot(rng, hidden, out_dim)
        return cls(w1=w1, b1=np.zeros(hidden), w2=w2, b2=np.zeros(out_dim), head=head)

    @property
    def hidden(self) -> int:
        return self.w1.shape[1]

    def parameters(self) -> Dict[str, np.ndarray]:
        return {"w1": self.w1, "b1": self.b1, "w2": self.w2, "b2": self.b2}

    def structural(self, nodes: Optional[np.ndarray], batch: int) -> np.ndarray:
        return np.zeros((batch, 0))


@dataclass
class EmbAugmentedModel:
    """
    MlpModel whose output layer also sees (A_hat emb)[v], a structural vector
    learned jointly with the rest. `base.w2` has hidden + k input rows.
    """

    base: MlpModel
    emb: np.ndarray
    a_hat: sp.csr_matrix = field(repr=False)

    @classmethod
    def initialize(
        cls,
        in_dim: int,
        hidden: int,
        out_dim: int,
        head: Head,
        a_hat: sp.csr_matrix,
        emb_dim: int,
        rng: np.random.Generator,
    ) -> "EmbAugmentedModel":
        n = a_hat.shape[0]
        w1 = glorot(rng, in_dim, hidden)
        w2 = glorot(rng, hidden + emb_dim, out_dim)
        base = MlpModel(w1=w1, b1=np.zeros(hidden), w2=w2, b2=np.zeros(out_dim), head=head)
        emb = glorot(rng, n, emb_dim) if emb_dim else np.zeros((n, 0))
        return cls(base=base, emb=emb, a_hat=a_hat)

    @property
    def head(self) -> Head:
        return self.base.head

    @property
    def hidden(self) -> int:
        return self.base.hidden

    def parameters(self) -> Dict[str, np.ndarray]:
        return {**self.base.parameters(), "emb": self.emb}

    def structural(self, nodes: Optional[np.ndarray], batch: int) -> np.ndarray:
        rows = self.a_hat if nodes is None else self.a_hat[nodes]
        return np.asarray(rows @ self.emb)


def _unpack(model):
    return model.base if isinstance(model, EmbAugmentedModel) else model


def _forward_cache(model, x, nodes, train_mode: bool, rng, keep_prob: float):
    base = _unpack(model)
    z1 = np.asarray(x @ base.w1) + base.b1
    a1 = np.maximum(z1, 0.0)

    mask = None
    if train_mode and keep_prob < 1.0:
        # Inverted dropout: inference needs no rescaling
        mask = (rng.random(a1.shape) < keep_prob) / keep_prob
        a1 = a1 * mask

    structural = model.structural(nodes, a1.shape[0])
    h = np.concatenate([a1, structural], axis=1)
    z2 = h @ base.w2 + base.b2
    probs = softmax(z2, axis=1) if base.head == Head.SOFTMAX else expit(z2)
    return probs, (z1, mask, h)


def forward(model, x, train_mode: bool = False, rng: Optional[np.random.Generator] = None,
            keep_prob: float = 1.0, nodes: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Class probabilities for a batch of feature rows.

    Dropout on the hidden layer is only applied when `train_mode` is set, with
    `keep_prob` as keep probability. `nodes` selects rows of the structural
    vector of an EmbAugmentedModel and must line up with `x`.
    """
    probs, _ = _forward_cache(model, x, nodes, train_mode, rng, keep_prob)
    return probs


def loss_and_grads(model, x_batch, y_batch: np.ndarray, cfg, nodes: Optional[np.ndarray] = None,
                   rng: Optional[np.random.Generator] = None,
                   train_mode: bool = False) -> Tuple[float, Dict[str, np.ndarray]]:
    """
    Loss and backpropagated gradients for every parameter tensor.

    Softmax head: mean cross-entropy. Sigmoid head: mean over nodes and labels
    of the positive-weighted binary cross-entropy. Both add
    cfg.l2_weight * ||w1||^2. Probabilities are clamped to [1e-12, 1 - 1e-12]
    before the log; clamped entries pass no gradient.

    Args:
        model: MlpModel or EmbAugmentedModel
        x_batch: feature rows, dense or scipy sparse
        y_batch: binary targets, one row per feature row
        cfg: TrainConfig (l2_weight, pos_weight, dropout_keep_prob)
        nodes: node ids of the rows, needed by EmbAugmentedModel
        rng: generator for dropout masks
        train_mode: apply dropout

    Returns:
        (loss, gradients keyed like model.parameters())
    """
    base = _unpack(model)
    keep_prob = cfg.dropout_keep_prob if train_mode else 1.0
    probs, (z1, mask, h) = _forward_cache(model, x_batch, nodes, train_mode, rng, keep_prob)
    y = np.asarray(y_batch, dtype=np.float64)
    batch = y.shape[0]
    clipped = np.clip(probs, CLAMP, 1.0 - CLAMP)
    inside = (probs > CLAMP) & (probs < 1.0 - CLAMP)

    if base.head == Head.SOFTMAX:
        loss = -np.sum(y * np.log(clipped)) / batch
        true_inside = np.sum(y * inside, axis=1, keepdims=True)
        dz2 = (probs - y) * true_inside / batch
    else:
        count = batch * y.shape[1]
        pos = cfg.pos_weight
        loss = -np.sum(pos * y * np.log(clipped) + (1.0 - y) * np.log(1.0 - clipped)) / count
        dz2 = (-pos * y * (1.0 - probs) + (1.0 - y) * probs) * inside / count

    loss += cfg.l2_weight * np.sum(base.w1 ** 2)

    grads = {
        "w2": h.T @ dz2,
        "b2": dz2.sum(axis=0),
    }
    dh = dz2 @ base.w2.T
    da1 = dh[:, :base.hidden]
    if mask is not None:
        da1 = da1 * mask
    dz1 = da1 * (z1 > 0)
    grads["w1"] = np.asarray(x_batch.T @ dz1) + 2.0 * cfg.l2_weight * base.w1
    grads["b1"] = dz1.sum(axis=0)

    if isinstance(model, EmbAugmentedModel):
        ds = dh[:, base.hidden:]
        rows = model.a_hat if nodes is None else model.a_hat[nodes]
        grads["emb"] = np.asarray(rows.T @ ds)

    return float(loss), grads


def predict_proba(model, features, nodes: Optional[np.ndarray] = None) -> np.ndarray:
    x = getattr(features, "x", features)
    if isinstance(model, EmbAugmentedModel) and nodes is None:
        nodes = np.arange(x.shape[0])
    return forward(model, x, train_mode=False, nodes=nodes)


def predict(model, features, threshold: float = 0.5, nodes: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Binary label matrix. Softmax head: one-hot argmax, ties go to the lowest
    class index. Sigmoid head: probability >= threshold.
    """
    probs = predict_proba(model, features, nodes)
    if _unpack(model).head == Head.SOFTMAX:
        out = np.zeros(probs.shape, dtype=np.uint8)
        out[np.arange(probs.shape[0]), probs.argmax(axis=1)] = 1
        return out
    return (probs >= threshold).astype(np.uint8)
