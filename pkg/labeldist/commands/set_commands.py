import argparse

COMMANDS = [
    ("appr", "Compute the APPR matrix of a graph"),
    ("featurize", "Build LD, Adj or LabelConv features"),
    ("train-eval", "Train a classifier on features and evaluate it"),
    ("sweep", "Run methods over alphas and split seeds"),
    ("synth", "Write the communication-network synthetic dataset"),
    ("split", "Draw a train/val/test split and write it as JSON"),
]


def _add_dataset_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("dataset")
    group.add_argument("--edges", help="edge TSV: <src> <dst>")
    group.add_argument("--labels", help="label TSV: <id> <label>[,<label>...] (optional for appr)")
    group.add_argument("--content", help="Cora-style .content file")
    group.add_argument("--cites", help="Cora-style .cites file")
    group.add_argument("--components", help="component file written by `synth`")
    group.add_argument("--task", choices=["multiclass", "multilabel"], default=None, help="label mode of the TSV files")


def _add_appr_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, default=None, help="teleportation probability in (0, 1]")
    parser.add_argument("--epsilon", type=float, default=None, help="approximation threshold")


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("training")
    group.add_argument("--lr", type=float, default=None, help="learning rate")
    group.add_argument("--l2", type=float, default=None, help="L2 weight on the first layer")
    group.add_argument("--dropout-keep", type=float, default=None, help="dropout keep probability")
    group.add_argument("--epochs", type=int, default=None, help="maximum epochs")
    group.add_argument("--patience", type=int, default=None, help="early-stopping patience")
    group.add_argument("--hidden", type=int, default=None, help="hidden width (default 16)")
    group.add_argument("--pos-weight", type=float, default=None, help="positive weight, multilabel only (default 10)")
    group.add_argument("--emb-dim", type=int, default=None, help="structural embedding width; enables LD+EMB")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="labeldist",
        description="Node classification from local label distributions",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--config", help="JSON config file, see labeldist/config.example.json")
    parser.add_argument("--log-level", default=None, help="logging level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    parsers = {name: subparsers.add_parser(name, help=text) for name, text in COMMANDS}
    for name, sub in parsers.items():
        sub.add_argument("--seed", type=int, default=0, help="seed for every random choice")
        sub.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
        if name != "synth":
            _add_dataset_flags(sub)

    appr = parsers["appr"]
    _add_appr_flags(appr)
    appr.add_argument("--out", required=True, help="APPR1 output file")

    featurize = parsers["featurize"]
    _add_appr_flags(featurize)
    featurize.add_argument("--appr", help="precomputed APPR1 file (ld mode)")
    featurize.add_argument("--split", required=True, help="split JSON")
    featurize.add_argument("--mode", choices=["ld", "adj", "labelconv"], default="ld")
    featurize.add_argument("--out", required=True, help="feature dump")

    train_eval = parsers["train-eval"]
    train_eval.add_argument("--features", required=True, help="feature dump from `featurize`")
    train_eval.add_argument("--split", required=True, help="split JSON")
    train_eval.add_argument("--method", default="LD", help="method name recorded in the report")
    train_eval.add_argument("--alpha", type=float, default=None, help="alpha recorded in the report")
    train_eval.add_argument("--report-out", help="report CSV, appended to")
    train_eval.add_argument("--log-out", help="training log CSV")
    train_eval.add_argument("--checkpoint-out", help="LDMLP1 checkpoint")
    _add_train_flags(train_eval)

    sweep = parsers["sweep"]
    sweep.add_argument("--alphas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    sweep.add_argument("--seeds", default="0,1,2,3,4,5,6,7,8,9", help="split seeds")
    sweep.add_argument("--methods", default="ld", help="comma list of ld, ld+emb, adj, labelconv")
    sweep.add_argument("--epsilon", type=float, default=None, help="approximation threshold")
    sweep.add_argument("--report-out", required=True, help="report CSV")
    sweep.add_argument("--summary-out", help="summary CSV (default: <report>.summary.csv)")
    sweep.add_argument("--cache-dir", help="directory for cached APPR matrices")
    sweep.add_argument("--timing", action="store_true", help="record wall_ms (makes reports non-reproducible)")
    _add_train_flags(sweep)

    synth = parsers["synth"]
    synth.add_argument("--num-components", type=int, default=10)
    synth.add_argument("--printers", type=int, default=8, help="printers per component")
    synth.add_argument("--databases", type=int, default=8, help="databases per component")
    synth.add_argument("--out-prefix", required=True)

    split = parsers["split"]
    split.add_argument("--strategy", choices=["auto", "planetoid", "ratio", "component"], default="auto")
    split.add_argument("--out", required=True, help="split JSON")

    return parser
