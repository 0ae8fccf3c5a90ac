"""Evaluation protocols: closed-set, cross-attack transfer and reduced-mask ablation."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from featurelens.analysis.attribution import gbt_importance, reduce_features
from featurelens.analysis.metrics import EvalReport, evaluate
from featurelens.config.settings import Config
from featurelens.core.tables import format_cell, read_table, write_table
from featurelens.core.verbosity import VerbosityLevel, emit
from featurelens.detectors.base import DetectorModel, predict_scores, train
from featurelens.features.mmd import MmdReference
from featurelens.features.pipeline import (
    ScalerState,
    apply_artifacts,
    extract_matrix,
    fit_artifacts,
    select_columns,
)
from featurelens.synth.benchmark import read_manifest, resolve_paths

HYBRID = "hybrid"
EXCLUDED = "excluded"


@dataclass
class RawBenchmark:
    """Unstandardized structural features of one benchmark, with labels and splits."""

    name: str
    raw50: np.ndarray
    labels: np.ndarray
    splits: np.ndarray

    def part(self, split: str) -> Tuple[np.ndarray, np.ndarray]:
        mask = self.splits == split
        return self.raw50[mask], self.labels[mask]

    @classmethod
    def concat(cls, name: str, parts: Sequence[Tuple[np.ndarray, np.ndarray, str]]) -> RawBenchmark:
        return cls(
            name=name,
            raw50=np.vstack([p[0] for p in parts]),
            labels=np.concatenate([p[1] for p in parts]),
            splits=np.concatenate([np.full(p[1].size, p[2]) for p in parts]),
        )


def load_benchmark(
    manifest: Union[str, Path],
    name: Optional[str] = None,
    config: Optional[Config] = None,
    jobs: Optional[int] = None,
    verbose: Union[bool, int] = False,
) -> RawBenchmark:
    """Extract every image listed in a manifest."""
    rows = read_manifest(manifest)
    name = name or Path(manifest).parent.name
    emit(verbose, VerbosityLevel.BASIC, f"Extracting {len(rows)} images of {name}")
    raw50 = extract_matrix(resolve_paths(rows, manifest), config, jobs, verbose)
    return RawBenchmark(
        name=name,
        raw50=raw50,
        labels=np.array([r.label for r in rows], dtype=np.int64),
        splits=np.array([r.split for r in rows]),
    )


@dataclass
class FittedDetector:
    """A model together with the artifacts needed to standardize new raw rows."""

    model: DetectorModel
    scaler: ScalerState
    reference: MmdReference

    def scores(self, raw50: np.ndarray) -> np.ndarray:
        X = select_columns(apply_artifacts(raw50, self.scaler, self.reference), self.model.feature_mask)
        return predict_scores(self.model, X)

    def evaluate(self, raw50: np.ndarray, labels: np.ndarray) -> EvalReport:
        return evaluate(self.scores(raw50), labels)


def fit_detector(
    bench: RawBenchmark,
    kind: str,
    seed: int,
    config: Optional[Config] = None,
    feature_mask: Optional[Sequence[bool]] = None,
    verbose: Union[bool, int] = False,
) -> FittedDetector:
    """
    Fit artifacts on the training split, then train with the validation split.

    A benchmark without a training split is used whole.
    """
    config = config or Config.create_default()
    train_mask = bench.splits == "train"
    if not train_mask.any():
        train_mask = np.ones(bench.labels.size, dtype=bool)
    scaler, reference = fit_artifacts(
        bench.raw50, bench.labels, train_mask, seed, config.mmd_reference_size
    )

    def standardized(rows: np.ndarray) -> np.ndarray:
        return select_columns(apply_artifacts(bench.raw50[rows], scaler, reference), feature_mask)

    valid_mask = bench.splits == "valid"
    valid = (standardized(valid_mask), bench.labels[valid_mask]) if valid_mask.any() else None
    model = train(
        kind,
        standardized(train_mask),
        bench.labels[train_mask],
        valid=valid,
        seed=seed,
        config=config,
        scaler=scaler,
        reference=reference,
        feature_mask=feature_mask,
        verbose=verbose,
    )
    return FittedDetector(model=model, scaler=scaler, reference=reference)


def closed_set(
    bench: RawBenchmark,
    kind: str,
    seed: int,
    config: Optional[Config] = None,
    feature_mask: Optional[Sequence[bool]] = None,
    verbose: Union[bool, int] = False,
) -> Tuple[FittedDetector, EvalReport]:
    """Train and test on the same attack family."""
    fitted = fit_detector(bench, kind, seed, config, feature_mask, verbose)
    X_test, y_test = bench.part("test")
    return fitted, fitted.evaluate(X_test, y_test)


@dataclass
class CrossEvalMatrix:
    """
    Transfer results: ``cells[train][test]`` is the report of a model trained
    on one benchmark and tested on another (or on the hybrid test set).
    """

    benchmarks: List[str]
    cells: Dict[str, Dict[str, EvalReport]] = field(default_factory=dict)

    @property
    def train_rows(self) -> List[str]:
        return list(self.cells)

    def off_diagonal(self, train_name: str) -> List[EvalReport]:
        """Single-benchmark cells of a row, excluding the diagonal and the hybrid column."""
        row = self.cells[train_name]
        return [row[b] for b in self.benchmarks if b != train_name and b in row]

    def row_stats(self, train_name: str, metric: str = "accuracy") -> Tuple[float, float]:
        """Mean and population std of ``metric`` over the row's off-diagonal cells."""
        values = np.array([getattr(r, metric) for r in self.off_diagonal(train_name)])
        if values.size == 0:
            return float("nan"), float("nan")
        return float(values.mean()), float(values.std())


def cross_evaluate(
    benchmarks: Mapping[str, RawBenchmark],
    kind: str = "gbt",
    seed: int = 42,
    config: Optional[Config] = None,
    hybrid_train: bool = False,
    verbose: Union[bool, int] = False,
) -> CrossEvalMatrix:
    """
    Train one model per benchmark and test it on every other benchmark's test split.

    Each row also gets a hybrid cell: the union of the other benchmarks' test
    splits. With ``hybrid_train`` an extra row is trained on every training
    split together and tested on each benchmark.
    """
    names = list(benchmarks)
    matrix = CrossEvalMatrix(benchmarks=names)
    tests = {name: bench.part("test") for name, bench in benchmarks.items()}

    for train_name in names:
        emit(verbose, VerbosityLevel.BASIC, f"Cross-eval: training on {train_name}")
        fitted = fit_detector(benchmarks[train_name], kind, seed, config, verbose=verbose)
        row: Dict[str, EvalReport] = {}
        for test_name in names:
            if test_name != train_name:
                row[test_name] = fitted.evaluate(*tests[test_name])
        others = [tests[n] for n in names if n != train_name]
        if others:
            row[HYBRID] = fitted.evaluate(
                np.vstack([o[0] for o in others]), np.concatenate([o[1] for o in others])
            )
        matrix.cells[train_name] = row

    if hybrid_train:
        emit(verbose, VerbosityLevel.BASIC, "Cross-eval: training on the hybrid set")
        parts = []
        for bench in benchmarks.values():
            for split in ("train", "valid"):
                X, y = bench.part(split)
                parts.append((X, y, split))
        fitted = fit_detector(RawBenchmark.concat(HYBRID, parts), kind, seed, config, verbose=verbose)
        matrix.cells[HYBRID] = {name: fitted.evaluate(*tests[name]) for name in names}

    return matrix


def write_matrix_csv(matrix: CrossEvalMatrix, path: Union[str, Path]) -> None:
    """
    One row per training set; ``acc_<test>``/``auc_<test>`` per test set, the
    hybrid column, and per-row mean ± std over off-diagonal cells.
    """
    columns = matrix.benchmarks + [HYBRID]
    header = ["train"]
    for name in columns:
        header += [f"acc_{name}", f"auc_{name}"]
    header += ["acc_mean", "acc_std", "auc_mean", "auc_std"]

    lines = []
    for train_name in matrix.train_rows:
        cells = matrix.cells[train_name]
        line = [train_name]
        for name in columns:
            if name == train_name:
                line += [EXCLUDED, EXCLUDED]
            elif name in cells:
                line += [format_cell(cells[name].accuracy), format_cell(cells[name].auc)]
            else:
                line += ["", ""]
        acc_mean, acc_std = matrix.row_stats(train_name, "accuracy")
        auc_mean, auc_std = matrix.row_stats(train_name, "auc")
        line += [format_cell(v) for v in (acc_mean, acc_std, auc_mean, auc_std)]
        lines.append(line)
    write_table(pd.DataFrame(lines, columns=header, dtype=str), path)


def read_matrix_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    """Rows as text cells; ``excluded`` on the diagonal, empty where nothing was measured."""
    frame = read_table(path, "cross-evaluation matrix", dtype=str).fillna("")
    return frame.to_dict("records")


@dataclass
class ReducedComparison:
    """Closed-set GBT accuracy on the full and the top-k gain representation."""

    full: EvalReport
    reduced: EvalReport
    mask: List[bool]

    @property
    def accuracy_drop(self) -> float:
        return self.full.accuracy - self.reduced.accuracy


def compare_reduced(
    bench: RawBenchmark,
    k: int = 37,
    seed: int = 42,
    config: Optional[Config] = None,
    verbose: Union[bool, int] = False,
) -> ReducedComparison:
    """Train GBT on all 51 features, keep the top-``k`` by gain, retrain and compare."""
    full_fit, full_report = closed_set(bench, "gbt", seed, config, verbose=verbose)
    mask = reduce_features(gbt_importance(full_fit.model, "gain"), k)
    _, reduced_report = closed_set(bench, "gbt", seed, config, feature_mask=mask, verbose=verbose)
    emit(
        verbose,
        VerbosityLevel.BASIC,
        f"Reduced to {k} features: accuracy "
        f"{full_report.accuracy:.4f} → {reduced_report.accuracy:.4f}",
    )
    return ReducedComparison(full=full_report, reduced=reduced_report, mask=mask)
