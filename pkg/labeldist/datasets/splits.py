import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from labeldist.datasets.dataset import Dataset
from labeldist.errors import InputError
from labeldist.features.labels import Task


class SplitSpec(BaseModel):
    """
    Train / validation / test node sets, plus context nodes whose labels are
    observed but which are neither trained on nor evaluated.

    Node lists are sorted; `seed` is the PRNG seed the split was drawn with.
    With `observe_train` unset only the context labels are visible to
    feature construction.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int
    train: Tuple[int, ...]
    val: Tuple[int, ...]
    test: Tuple[int, ...]
    context: Tuple[int, ...] = ()
    observe_train: bool = True

    @field_validator("train", "val", "test", "context", mode="before")
    @classmethod
    def _sorted_ints(cls, value):
        return tuple(sorted(int(v) for v in value))

    @model_validator(mode="after")
    def _disjoint(self):
        parts = [self.train, self.val, self.test, self.context]
        total = sum(len(part) for part in parts)
        if len(set().union(*map(set, parts))) != total:
            raise ValueError("train, val, test and context must be pairwise disjoint")
        if any(node < 0 for part in parts for node in part):
            raise ValueError("node ids must be non-negative")
        return self

    @property
    def train_idx(self) -> np.ndarray:
        return np.asarray(self.train, dtype=np.int64)

    @property
    def val_idx(self) -> np.ndarray:
        return np.asarray(self.val, dtype=np.int64)

    @property
    def test_idx(self) -> np.ndarray:
        return np.asarray(self.test, dtype=np.int64)

    @property
    def context_idx(self) -> np.ndarray:
        return np.asarray(self.context, dtype=np.int64)

    def check_against(self, ds: Dataset) -> None:
        """Range and labeling checks that need the dataset."""
        everything = self.train + self.val + self.test + self.context
        if everything and max(everything) >= ds.n:
            raise InputError(f"split references node {max(everything)} but the dataset has {ds.n} nodes")
        observed = np.asarray(self.train + self.context, dtype=np.int64)
        if not ds.labels.labeled_mask[observed].all():
            raise InputError("training and context nodes must be labeled")


def planetoid_split(ds: Dataset, per_class: int = 20, n_val: int = 500, n_test: int = 1000,
                    seed: int = 0) -> SplitSpec:
    """
    `per_class` random training nodes per class, then `n_test` and `n_val`
    nodes drawn uniformly without replacement from the remaining labeled nodes.
    """
    if ds.task != Task.MULTICLASS:
        raise InputError("planetoid splits need multiclass labels")
    rng = np.random.default_rng(seed)
    classes = ds.labels.classes()

    train = []
    for j, name in enumerate(ds.label_names):
        members = np.flatnonzero(classes == j)
        if members.size < per_class:
            raise InputError(f"class {name!r} has {members.size} nodes, fewer than {per_class}")
        train.append(rng.choice(members, size=per_class, replace=False))
    train = np.concatenate(train) if train else np.empty(0, dtype=np.int64)

    remainder = np.setdiff1d(ds.labels.labeled_nodes, train)
    if remainder.size < n_val + n_test:
        raise InputError(f"only {remainder.size} labeled nodes remain for {n_test} test and {n_val} validation nodes")
    drawn = rng.permutation(remainder)
    test = drawn[:n_test]
    val = drawn[n_test:n_test + n_val]
    return SplitSpec(seed=seed, train=train, val=val, test=test)


def ratio_split(ds: Dataset, train_frac: float = 0.7, val_frac: float = 0.1, test_frac: float = 0.2,
                seed: int = 0) -> SplitSpec:
    """
    Uniform random (non-stratified) partition of the labeled nodes.

    Sizes are floor(train_frac * n) and floor(val_frac * n); the test set
    takes the remainder.
    """
    fractions = (train_frac, val_frac, test_frac)
    if any(f < 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise InputError(f"split fractions must be non-negative and sum to 1, got {fractions}")
    nodes = ds.labels.labeled_nodes
    n = nodes.size
    n_train = math.floor(train_frac * n + 1e-9)
    n_val = math.floor(val_frac * n + 1e-9)

    drawn = np.random.default_rng(seed).permutation(nodes)
    return SplitSpec(
        seed=seed,
        train=drawn[:n_train],
        val=drawn[n_train:n_train + n_val],
        test=drawn[n_train + n_val:],
    )


def component_split(ds: Dataset, n_test_components: int = 2, n_val_components: int = 1,
                    seed: int = 0) -> SplitSpec:
    """
    Split by whole components: targets of the test components are tested,
    targets of the validation components validate, the other targets train.
    Context nodes of every component go to `context`.
    """
    if ds.components is None:
        raise InputError("dataset has no component structure")
    component_ids = np.unique(ds.components)
    if component_ids.size < n_test_components + n_val_components + 1:
        raise InputError(
            f"{component_ids.size} components cannot hold {n_test_components} test, "
            f"{n_val_components} validation and at least one training component"
        )

    order = np.random.default_rng(seed).permutation(component_ids)
    test_components = order[:n_test_components]
    val_components = order[n_test_components:n_test_components + n_val_components]

    targets = ~ds.context_mask & ds.labels.labeled_mask
    in_test = np.isin(ds.components, test_components)
    in_val = np.isin(ds.components, val_components)
    return SplitSpec(
        seed=seed,
        train=np.flatnonzero(targets & ~in_test & ~in_val),
        val=np.flatnonzero(targets & in_val),
        test=np.flatnonzero(targets & in_test),
        context=np.flatnonzero(ds.context_mask),
        observe_train=False,
    )


def save_split(split: SplitSpec, path) -> None:
    with open(path, "w") as f:
        f.write(split.model_dump_json(indent=2))
        f.write("\n")


def load_split(path) -> SplitSpec:
    try:
        with open(path) as f:
            return SplitSpec.model_validate_json(f.read())
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
