import asyncio
import logging
import os
import time
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from labeldist.appr.matrix import appr_all_async, load_matrix, save_matrix
from labeldist.config_data import Settings, load_settings
from labeldist.datasets.dataset import Dataset
from labeldist.datasets.loaders import (
    load_components,
    load_content_cites,
    load_edge_label_tsv,
    load_edge_list,
    write_components,
    write_edge_label_tsv,
)
from labeldist.datasets.splits import component_split, load_split, planetoid_split, ratio_split, save_split
from labeldist.datasets.synthetic import make_network_synthetic
from labeldist.errors import InputError, LabelDistError
from labeldist.evaluation.experiment import ExperimentConfig, ExperimentService, Method
from labeldist.evaluation.metrics import accuracy, macro_f1, micro_f1
from labeldist.evaluation.report import EvalReport, ReportRow, summarize, write_summary
from labeldist.features.distribution import (
    adjacency_features,
    build_label_distribution,
    label_conv_features,
    load_features,
    save_sparse_features,
)
from labeldist.features.labels import Task, train_label_matrix
from labeldist.nn.checkpoint import save_checkpoint
from labeldist.nn.model import MlpModel, predict
from labeldist.nn.train import train, train_emb_augmented

logger = logging.getLogger(__name__)

TRAIN_FLAGS = {
    "lr": "learning_rate",
    "l2": "l2_weight",
    "dropout_keep": "dropout_keep_prob",
    "epochs": "max_epochs",
    "patience": "early_stop_patience",
    "hidden": "hidden",
    "pos_weight": "pos_weight",
}


class CliConfig(BaseModel):
    """Parsed flags of one invocation, checked before any computation."""

    model_config = ConfigDict(extra="allow")

    command: str
    config: Optional[str] = None
    edges: Optional[str] = None
    labels: Optional[str] = None
    content: Optional[str] = None
    cites: Optional[str] = None
    components: Optional[str] = None
    task: Optional[Task] = None
    alpha: Optional[float] = None
    epsilon: Optional[float] = None
    threads: Optional[int] = None
    pos_weight: Optional[float] = None
    emb_dim: Optional[int] = None

    @model_validator(mode="after")
    def _consistent(self):
        if self.command != "synth":
            tsv = self.edges is not None or self.labels is not None
            citation = self.content is not None or self.cites is not None
            if tsv and citation:
                raise ValueError("use either --edges/--labels or --content/--cites, not both")
            graph_only = self.command == "appr" and self.edges is not None and self.labels is None
            if tsv and not graph_only and (self.edges is None or self.labels is None):
                raise ValueError("--edges and --labels go together")
            if citation and (self.content is None or self.cites is None):
                raise ValueError("--content and --cites go together")
            if not tsv and not citation:
                raise ValueError("a dataset is required: --edges/--labels or --content/--cites")
            if citation and self.task == Task.MULTILABEL:
                raise ValueError("citation datasets are multiclass")
        if self.pos_weight is not None and self.task != Task.MULTILABEL:
            raise ValueError("--pos-weight only applies to --task multilabel")
        if self.alpha is not None and not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"--alpha must be in (0, 1], got {self.alpha}")
        if self.epsilon is not None and self.epsilon <= 0.0:
            raise ValueError(f"--epsilon must be positive, got {self.epsilon}")
        if self.threads is not None and self.threads < 1:
            raise ValueError(f"--threads must be >= 1, got {self.threads}")
        if self.emb_dim is not None and self.emb_dim < 0:
            raise ValueError(f"--emb-dim must be >= 0, got {self.emb_dim}")
        return self

    def flag(self, name: str, default: Any = None) -> Any:
        value = getattr(self, name, None)
        return default if value is None else value


def _settings(cli: CliConfig) -> Settings:
    overrides: Dict[str, Any] = {}
    train = {field: cli.flag(flag) for flag, field in TRAIN_FLAGS.items() if cli.flag(flag) is not None}
    train["rng_seed"] = cli.flag("seed", 0)
    overrides["train"] = train
    if cli.alpha is not None or cli.epsilon is not None:
        base = load_settings(cli.config).appr
        overrides["appr"] = {"alpha": cli.flag("alpha", base.alpha), "epsilon": cli.flag("epsilon", base.epsilon)}
    for name in ("threads", "emb_dim", "cache_dir", "log_level"):
        if cli.flag(name) is not None:
            overrides[name] = cli.flag(name)
    return load_settings(cli.config, overrides)


def _load_dataset(cli: CliConfig) -> Dataset:
    if cli.content:
        ds = load_content_cites(cli.content, cli.cites)
    else:
        ds = load_edge_label_tsv(cli.edges, cli.labels, cli.task or Task.MULTICLASS)
    if cli.components:
        ds = load_components(cli.components, ds)
    return ds


async def cmd_appr(cli: CliConfig, settings: Settings) -> int:
    # labels are optional here, APPR only needs the graph
    if cli.edges and not cli.labels:
        graph, _ = load_edge_list(cli.edges)
    else:
        graph = _load_dataset(cli).graph
    started = time.perf_counter()
    matrix = await appr_all_async(graph, settings.appr, settings.threads)
    elapsed = time.perf_counter() - started
    save_matrix(matrix, cli.out)
    print(f"n={matrix.n} nnz={matrix.nnz} wall={elapsed:.3f}s")
    return 0


async def cmd_featurize(cli: CliConfig, settings: Settings) -> int:
    ds = _load_dataset(cli)
    split = load_split(cli.split)
    split.check_against(ds)
    y_train = train_label_matrix(ds.labels, split)

    if cli.mode == "adj":
        save_sparse_features(adjacency_features(ds.graph), cli.out)
        print(f"features={ds.n}x{ds.n} mode=adj")
        return 0

    if cli.mode == "labelconv":
        features = label_conv_features(ds.graph, y_train)
    else:
        if cli.flag("appr"):
            matrix = load_matrix(cli.appr)
        else:
            matrix = await appr_all_async(ds.graph, settings.appr, settings.threads)
        features = build_label_distribution(matrix, y_train)
    features.save_text(cli.out)
    rows, cols = features.shape
    print(f"features={rows}x{cols} mode={cli.mode}")
    return 0


def _evaluate(model, features, ds: Dataset, split, threshold: float, method: str, alpha) -> ReportRow:
    pred = predict(model, features, threshold)
    test = split.test_idx
    return ReportRow(
        method=method,
        alpha=alpha,
        split_seed=split.seed,
        micro_f1=micro_f1(pred, ds.labels, test),
        macro_f1=macro_f1(pred, ds.labels, test),
        accuracy=accuracy(pred, ds.labels, test),
        val_micro_f1=micro_f1(pred, ds.labels, split.val_idx) if split.val else 0.0,
    )


async def cmd_train_eval(cli: CliConfig, settings: Settings) -> int:
    ds = _load_dataset(cli)
    split = load_split(cli.split)
    split.check_against(ds)
    features = load_features(cli.features)
    if features.shape[0] != ds.n:
        raise InputError(f"{cli.features} has {features.shape[0]} rows but the dataset has {ds.n} nodes")

    emb_dim = cli.flag("emb_dim")
    if emb_dim is not None:
        model, log = await asyncio.to_thread(train_emb_augmented, ds.graph, features, ds.labels, split,
                                             settings.train, emb_dim)
    else:
        model, log = await asyncio.to_thread(train, features, ds.labels, split, settings.train)

    row = _evaluate(model, features, ds, split, settings.train.threshold, cli.method, cli.flag("alpha"))
    if cli.flag("report_out"):
        EvalReport(rows=[row]).to_csv(cli.report_out, append=True)
    if cli.flag("log_out"):
        log.to_csv(cli.log_out)
    if cli.flag("checkpoint_out"):
        if not isinstance(model, MlpModel):
            raise InputError("--checkpoint-out supports plain MLP models only")
        save_checkpoint(model, cli.checkpoint_out)
    print(
        f"micro_f1={row.micro_f1:.6f} macro_f1={row.macro_f1:.6f} accuracy={row.accuracy:.6f} "
        f"best_epoch={log.best_epoch}"
    )
    return 0


def _parse_list(text: str, kind) -> List:
    try:
        return [kind(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise InputError(f"cannot parse list {text!r}")


async def cmd_sweep(cli: CliConfig, settings: Settings) -> int:
    ds = _load_dataset(cli)
    alphas = _parse_list(cli.alphas, float)
    seeds = _parse_list(cli.seeds, int)
    methods = [Method.parse(name) for name in cli.methods.split(",") if name.strip()]
    if not methods:
        raise InputError("--methods is empty")

    cfg = ExperimentConfig(
        epsilon=cli.flag("epsilon", settings.appr.epsilon),
        train=settings.train,
        emb_dim=settings.emb_dim,
        threads=settings.threads,
        cache_dir=settings.cache_dir,
        record_timing=cli.timing,
    )
    service = ExperimentService(cfg)
    report = EvalReport()
    for method in methods:
        report = report.merged(await service.run_experiment(ds, method, alphas, seeds))

    report.to_csv(cli.report_out)
    summary_out = cli.flag("summary_out") or f"{os.path.splitext(cli.report_out)[0]}.summary.csv"
    summary = summarize(report)
    write_summary(summary, summary_out)
    print(summary.to_string(index=False))
    return 0


async def cmd_synth(cli: CliConfig, settings: Settings) -> int:
    ds = make_network_synthetic(cli.num_components, cli.seed, cli.printers, cli.databases)
    prefix = cli.out_prefix
    write_edge_label_tsv(ds, f"{prefix}.edges.tsv", f"{prefix}.labels.tsv")
    write_components(ds, f"{prefix}.components.tsv")
    print(f"nodes={ds.n} edges={ds.graph.num_edges} prefix={prefix}")
    return 0


async def cmd_split(cli: CliConfig, settings: Settings) -> int:
    ds = _load_dataset(cli)
    strategy = cli.strategy
    if strategy == "auto":
        strategy = "component" if ds.components is not None else (
            "planetoid" if ds.task == Task.MULTICLASS else "ratio"
        )
    if strategy == "component":
        split = component_split(ds, seed=cli.seed)
    elif strategy == "planetoid":
        split = planetoid_split(ds, seed=cli.seed)
    else:
        split = ratio_split(ds, seed=cli.seed)
    save_split(split, cli.out)
    print(f"train={len(split.train)} val={len(split.val)} test={len(split.test)} context={len(split.context)}")
    return 0


HANDLERS = {
    "appr": cmd_appr,
    "featurize": cmd_featurize,
    "train-eval": cmd_train_eval,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
    "split": cmd_split,
}


async def dispatch(args) -> int:
    """Validate flags, run the handler and map failures to exit codes."""
    try:
        cli = CliConfig.model_validate({key: value for key, value in vars(args).items() if value is not None})
        settings = _settings(cli)
        logging.getLogger().setLevel(settings.log_level.upper())
        return await HANDLERS[cli.command](cli, settings)
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        return InputError.exit_code
    except LabelDistError as e:
        logger.error(str(e))
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return InputError.exit_code
    except Exception as e:
        logger.exception(f"Unexpected failure in {getattr(args, 'command', '?')}: {e}")
        return 1
