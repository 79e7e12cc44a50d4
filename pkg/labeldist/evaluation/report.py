from typing import List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from labeldist.errors import InputError

REPORT_COLUMNS = ["method", "alpha", "split_seed", "micro_f1", "macro_f1", "accuracy", "wall_ms"]
METRIC_FORMAT = "%.6f"
HEADER_NOTE = (
    "# F1 with a zero denominator is 0; macro F1 averages every label; "
    "std is the population standard deviation"
)


class ReportRow(BaseModel):
    method: str
    alpha: Optional[float] = None
    split_seed: int
    micro_f1: float = Field(ge=0.0, le=1.0)
    macro_f1: float = Field(ge=0.0, le=1.0)
    accuracy: float = Field(ge=0.0, le=1.0)
    wall_ms: float = Field(default=0.0, ge=0.0)
    val_micro_f1: float = Field(default=0.0, ge=0.0, le=1.0)

    def sort_key(self):
        return (self.method, -1.0 if self.alpha is None else self.alpha, self.split_seed)


class EvalReport(BaseModel):
    rows: List[ReportRow] = Field(default_factory=list)

    def sorted(self) -> "EvalReport":
        return EvalReport(rows=sorted(self.rows, key=ReportRow.sort_key))

    def merged(self, other: "EvalReport") -> "EvalReport":
        return EvalReport(rows=self.rows + other.rows).sorted()

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [row.model_dump() for row in self.sorted().rows],
            columns=REPORT_COLUMNS + ["val_micro_f1"],
        )

    def to_csv(self, path, append: bool = False) -> None:
        frame = self.to_frame()[REPORT_COLUMNS]
        write_header = not append
        if append:
            try:
                with open(path) as f:
                    write_header = not f.read(1)
            except FileNotFoundError:
                write_header = True
        frame.to_csv(
            path,
            mode="a" if append else "w",
            header=write_header,
            index=False,
            float_format=METRIC_FORMAT,
            lineterminator="\n",
        )


def summarize(report: EvalReport) -> pd.DataFrame:
    """
    Mean and population std of every metric per (method, alpha), rows sorted
    by method then alpha. `selected` marks the validation-chosen alpha.
    """
    if not report.rows:
        raise InputError("cannot summarize an empty report")
    frame = report.to_frame()
    grouped = frame.groupby(["method", "alpha"], dropna=False, sort=True)
    summary = grouped.agg(
        runs=("split_seed", "size"),
        micro_f1_mean=("micro_f1", "mean"),
        micro_f1_std=("micro_f1", lambda s: float(np.std(s, ddof=0))),
        macro_f1_mean=("macro_f1", "mean"),
        macro_f1_std=("macro_f1", lambda s: float(np.std(s, ddof=0))),
        accuracy_mean=("accuracy", "mean"),
        accuracy_std=("accuracy", lambda s: float(np.std(s, ddof=0))),
        val_micro_f1_mean=("val_micro_f1", "mean"),
    ).reset_index()

    summary["selected"] = False
    for method in summary["method"].unique():
        chosen = select_alpha(report, method)
        match = (summary["method"] == method) & (
            summary["alpha"].isna() if chosen is None else summary["alpha"] == chosen
        )
        summary.loc[match, "selected"] = True
    return summary


def select_alpha(report: EvalReport, method: str) -> Optional[float]:
    """Alpha with the best mean validation micro-F1 for `method`; ties go to the smallest alpha."""
    rows = [row for row in report.rows if row.method == method]
    if not rows:
        raise InputError(f"no rows for method {method}")
    means = {}
    for alpha in sorted({row.alpha for row in rows}, key=lambda a: -1.0 if a is None else a):
        scores = [row.val_micro_f1 for row in rows if row.alpha == alpha]
        means[alpha] = float(np.mean(scores))
    best = max(means.values())
    return next(alpha for alpha, score in means.items() if score == best)


def write_summary(summary: pd.DataFrame, path) -> None:
    with open(path, "w") as f:
        f.write(HEADER_NOTE + "\n")
        summary.to_csv(f, index=False, float_format=METRIC_FORMAT, lineterminator="\n")
