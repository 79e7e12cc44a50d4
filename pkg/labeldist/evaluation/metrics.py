from typing import Tuple

import numpy as np

from labeldist.errors import InputError


def _pooled(pred, truth, eval_set) -> Tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(getattr(pred, "y", pred))
    truth = np.asarray(getattr(truth, "y", truth))
    if pred.shape != truth.shape:
        raise InputError(f"prediction shape {pred.shape} does not match truth shape {truth.shape}")
    rows = np.asarray(eval_set, dtype=np.int64)
    return pred[rows].astype(bool), truth[rows].astype(bool)


def _f1(tp, fp, fn):
    denominator = 2 * tp + fp + fn
    return np.where(denominator > 0, 2 * tp / np.maximum(denominator, 1), 0.0)


def micro_f1(pred, truth, eval_set) -> float:
    """F1 over all (node, label) decisions of `eval_set` pooled together; 0 when nothing is positive."""
    pred, truth = _pooled(pred, truth, eval_set)
    tp = int(np.sum(pred & truth))
    fp = int(np.sum(pred & ~truth))
    fn = int(np.sum(~pred & truth))
    return float(_f1(tp, fp, fn))


def macro_f1(pred, truth, eval_set) -> float:
    """Unweighted mean of per-label F1; a label never predicted nor present scores 0."""
    pred, truth = _pooled(pred, truth, eval_set)
    if pred.shape[1] == 0:
        return 0.0
    tp = np.sum(pred & truth, axis=0)
    fp = np.sum(pred & ~truth, axis=0)
    fn = np.sum(~pred & truth, axis=0)
    return float(np.mean(_f1(tp, fp, fn)))


def accuracy(pred, truth, eval_set) -> float:
    """Fraction of rows predicted exactly (subset accuracy for multilabel)."""
    pred, truth = _pooled(pred, truth, eval_set)
    if pred.shape[0] == 0:
        return 0.0
    return float(np.mean(np.all(pred == truth, axis=1)))
