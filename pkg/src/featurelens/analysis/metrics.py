"""Detection metrics: accuracy, precision/recall/F1, rank AUC and ROC points."""

from __future__ import annotations

from pathlib import Path
from typing import List, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field
from scipy.stats import rankdata

from featurelens.core.errors import DimensionMismatch, SingleClassAuc, UnreadableFile
from featurelens.core.tables import read_table, write_table

ROC_HEADER = ("threshold", "fpr", "tpr")


class Confusion(BaseModel):
    tp: int = Field(ge=0)
    fp: int = Field(ge=0)
    tn: int = Field(ge=0)
    fn: int = Field(ge=0)


class RocPoint(BaseModel):
    fpr: float = Field(ge=0.0, le=1.0)
    tpr: float = Field(ge=0.0, le=1.0)
    threshold: float


class EvalReport(BaseModel):
    """Single-operating-point metrics plus the full ROC; positive class = adversarial."""

    accuracy: float = Field(ge=0.0, le=1.0)
    precision: float = Field(ge=0.0, le=1.0)
    recall: float = Field(ge=0.0, le=1.0)
    f1: float = Field(ge=0.0, le=1.0)
    auc: float = Field(ge=0.0, le=1.0)
    threshold: float = 0.5
    n_samples: int = Field(ge=1)
    confusion: Confusion
    roc: List[RocPoint]

    def summary(self) -> str:
        return (
            f"acc={self.accuracy:.4f} f1={self.f1:.4f} auc={self.auc:.4f} "
            f"(tp={self.confusion.tp} fp={self.confusion.fp} "
            f"tn={self.confusion.tn} fn={self.confusion.fn})"
        )


def _check(scores: Sequence[float], labels: Sequence[int]):
    s = np.asarray(scores, dtype=np.float64).ravel()
    y = np.asarray(labels).ravel()
    if s.shape != y.shape:
        raise DimensionMismatch(f"{s.size} scores for {y.size} labels")
    if s.size == 0:
        raise ValueError("evaluation needs at least one sample")
    return s, (y == 1)


def auc_score(scores: Sequence[float], labels: Sequence[int]) -> float:
    """
    Mann-Whitney AUC with midranks for tied scores.

    Raises:
        SingleClassAuc: labels contain one class only
    """
    s, pos = _check(scores, labels)
    n_pos = int(pos.sum())
    n_neg = pos.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassAuc(f"AUC undefined with {n_pos} positives and {n_neg} negatives")
    ranks = rankdata(s, method="average")
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def roc_curve(scores: Sequence[float], labels: Sequence[int]) -> List[RocPoint]:
    """
    One point per distinct score, thresholds descending, predicting positive when s ≥ t.

    The first point (0, 0) uses a threshold just above the largest score.
    """
    s, pos = _check(scores, labels)
    n_pos = int(pos.sum())
    n_neg = pos.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassAuc("ROC undefined for single-class labels")

    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    tp = np.cumsum(pos[order])
    fp = np.cumsum(~pos[order])
    # last index of each run of equal scores
    ends = np.flatnonzero(np.append(s_sorted[1:] != s_sorted[:-1], True))

    points = [RocPoint(fpr=0.0, tpr=0.0, threshold=float(np.nextafter(s_sorted[0], np.inf)))]
    for i in ends:
        points.append(
            RocPoint(fpr=fp[i] / n_neg, tpr=tp[i] / n_pos, threshold=float(s_sorted[i]))
        )
    return points


def roc_area(points: Sequence[RocPoint]) -> float:
    """Trapezoidal area under ROC points."""
    fpr = np.array([p.fpr for p in points])
    tpr = np.array([p.tpr for p in points])
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))


def evaluate(scores: Sequence[float], labels: Sequence[int], threshold: float = 0.5) -> EvalReport:
    """
    Threshold the scores and compute every report field.

    Raises:
        SingleClassAuc: labels contain one class only
    """
    s, pos = _check(scores, labels)
    pred = s >= threshold
    tp = int(np.sum(pred & pos))
    fp = int(np.sum(pred & ~pos))
    tn = int(np.sum(~pred & ~pos))
    fn = int(np.sum(~pred & pos))

    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0

    return EvalReport(
        accuracy=(tp + tn) / s.size,
        precision=precision,
        recall=recall,
        f1=f1,
        auc=auc_score(s, pos.astype(np.int64)),
        threshold=threshold,
        n_samples=int(s.size),
        confusion=Confusion(tp=tp, fp=fp, tn=tn, fn=fn),
        roc=roc_curve(s, pos.astype(np.int64)),
    )


def write_roc_csv(points: Sequence[RocPoint], path: Union[str, Path]) -> None:
    frame = pd.DataFrame(
        [(p.threshold, p.fpr, p.tpr) for p in points], columns=list(ROC_HEADER), dtype=np.float64
    )
    write_table(frame, path)


def read_roc_csv(path: Union[str, Path]) -> List[RocPoint]:
    frame = read_table(path, "ROC CSV", header=ROC_HEADER, dtype=np.float64)
    return [
        RocPoint(threshold=t, fpr=fpr, tpr=tpr)
        for t, fpr, tpr in frame.itertuples(index=False, name=None)
    ]


def write_report(report: EvalReport, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")


def load_report(path: Union[str, Path]) -> EvalReport:
    try:
        return EvalReport.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise UnreadableFile(f"could not load report {path}: {e}") from e
