import asyncio
import logging
import time
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from labeldist.appr.push import ApprConfig
from labeldist.appr.service import ApprService
from labeldist.datasets.dataset import Dataset
from labeldist.datasets.splits import SplitSpec, component_split, planetoid_split, ratio_split
from labeldist.errors import InputError, LabelDistError, NumericalError
from labeldist.evaluation.metrics import accuracy, macro_f1, micro_f1
from labeldist.evaluation.report import EvalReport, ReportRow
from labeldist.features.distribution import adjacency_features, build_label_distribution, label_conv_features
from labeldist.features.labels import Task, train_label_matrix
from labeldist.nn.model import predict
from labeldist.nn.train import TrainConfig, train, train_emb_augmented

DEFAULT_ALPHAS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


class Method(str, Enum):
    LD = "LD"
    LD_EMB = "LD+EMB"
    ADJ = "Adj"
    LABEL_CONV = "LabelConv"

    @property
    def uses_alpha(self) -> bool:
        return self in (Method.LD, Method.LD_EMB)

    @classmethod
    def parse(cls, name: str) -> "Method":
        for method in cls:
            if method.value.lower() == name.strip().lower():
                return method
        raise InputError(f"unknown method {name!r}; choose from {', '.join(m.value for m in cls)}")


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    epsilon: float = Field(default=1e-5, gt=0.0)
    train: TrainConfig = Field(default_factory=TrainConfig)
    emb_dim: int = Field(default=16, ge=0)
    threads: int = Field(default=1, ge=1)
    cache_dir: Optional[str] = None
    per_class: int = Field(default=20, ge=1)
    n_val: int = Field(default=500, ge=0)
    n_test: int = Field(default=1000, ge=1)
    train_frac: float = Field(default=0.7, ge=0.0, le=1.0)
    val_frac: float = Field(default=0.1, ge=0.0, le=1.0)
    test_frac: float = Field(default=0.2, ge=0.0, le=1.0)
    n_test_components: int = Field(default=2, ge=1)
    n_val_components: int = Field(default=1, ge=0)
    record_timing: bool = False


class ExperimentService:
    """Runs (method, alpha, split seed) cells and collects an EvalReport."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.logger = logging.getLogger(__name__)
        self.appr_service = ApprService(cache_dir=cfg.cache_dir, parallelism=cfg.threads)

    def make_split(self, ds: Dataset, seed: int) -> SplitSpec:
        """Component split when the dataset has components, else the standard protocol for the task."""
        cfg = self.cfg
        if ds.components is not None:
            return component_split(ds, cfg.n_test_components, cfg.n_val_components, seed)
        if ds.task == Task.MULTICLASS:
            return planetoid_split(ds, cfg.per_class, cfg.n_val, cfg.n_test, seed)
        return ratio_split(ds, cfg.train_frac, cfg.val_frac, cfg.test_frac, seed)

    def _cell_train_config(self, split_seed: int) -> TrainConfig:
        state = np.random.SeedSequence([self.cfg.train.rng_seed, split_seed]).generate_state(1)[0]
        return self.cfg.train.model_copy(update={"rng_seed": int(state)})

    def _run_cell(self, ds: Dataset, method: Method, alpha: Optional[float], split_seed: int, appr) -> ReportRow:
        started = time.perf_counter()
        split = self.make_split(ds, split_seed)
        y_train = train_label_matrix(ds.labels, split)
        train_cfg = self._cell_train_config(split_seed)

        if method == Method.ADJ:
            features = adjacency_features(ds.graph)
        elif method == Method.LABEL_CONV:
            features = label_conv_features(ds.graph, y_train).x
        else:
            features = build_label_distribution(appr, y_train).x

        if method == Method.LD_EMB:
            model, _ = train_emb_augmented(ds.graph, features, ds.labels, split, train_cfg, self.cfg.emb_dim)
        else:
            model, _ = train(features, ds.labels, split, train_cfg)

        pred = predict(model, features, train_cfg.threshold)
        test = split.test_idx
        row = ReportRow(
            method=method.value,
            alpha=alpha,
            split_seed=split_seed,
            micro_f1=micro_f1(pred, ds.labels, test),
            macro_f1=macro_f1(pred, ds.labels, test),
            accuracy=accuracy(pred, ds.labels, test),
            val_micro_f1=micro_f1(pred, ds.labels, split.val_idx) if split.val else 0.0,
            wall_ms=(time.perf_counter() - started) * 1000.0 if self.cfg.record_timing else 0.0,
        )
        self.logger.info(
            f"{method.value} alpha={alpha} seed={split_seed}: micro_f1={row.micro_f1:.4f} "
            f"macro_f1={row.macro_f1:.4f} val_micro_f1={row.val_micro_f1:.4f}"
        )
        return row

    async def _guarded_cell(self, semaphore, ds, method, alpha, split_seed, appr) -> ReportRow:
        async with semaphore:
            try:
                return await asyncio.to_thread(self._run_cell, ds, method, alpha, split_seed, appr)
            except LabelDistError as e:
                context = f"{method.value} alpha={alpha} split_seed={split_seed}: {e}"
                if isinstance(e, NumericalError):
                    raise NumericalError(context) from e
                raise InputError(context) from e

    async def run_experiment(self, ds: Dataset, method: Method, alphas: Sequence[float],
                             split_seeds: Sequence[int]) -> EvalReport:
        """
        Train and evaluate `method` for every alpha and split seed.

        APPR matrices are computed once per alpha and shared by all seeds.
        Methods that do not use APPR run once per seed with alpha unset.
        """
        method = Method(method)
        if not split_seeds:
            raise InputError("need at least one split seed")
        grid: List[Optional[float]] = list(alphas) if method.uses_alpha else [None]
        if not grid:
            raise InputError("need at least one alpha")

        apprs = {}
        for alpha in grid:
            if alpha is not None:
                cfg = ApprConfig(alpha=alpha, epsilon=self.cfg.epsilon)
                apprs[alpha] = await self.appr_service.load_or_compute(ds.graph, cfg)

        semaphore = asyncio.Semaphore(self.cfg.threads)
        rows = await asyncio.gather(*(
            self._guarded_cell(semaphore, ds, method, alpha, seed, apprs.get(alpha))
            for alpha in grid
            for seed in split_seeds
        ))
        return EvalReport(rows=list(rows)).sorted()


def run_experiment(ds: Dataset, method, alphas: Sequence[float], split_seeds: Sequence[int],
                   cfg: Optional[ExperimentConfig] = None) -> EvalReport:
    service = ExperimentService(cfg or ExperimentConfig())
    return asyncio.run(service.run_experiment(ds, method, alphas, split_seeds))
