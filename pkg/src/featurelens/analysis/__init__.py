"""Metrics, attribution, separability and evaluation protocols."""

from featurelens.analysis.attribution import (
    gbt_importance,
    permutation_importance,
    reduce_features,
)
from featurelens.analysis.metrics import EvalReport, auc_score, evaluate, roc_curve
from featurelens.analysis.protocols import (
    CrossEvalMatrix,
    closed_set,
    compare_reduced,
    cross_evaluate,
)
from featurelens.analysis.separability import (
    construct_separator,
    displacement,
    separation_ratio,
)

__all__ = [
    "CrossEvalMatrix",
    "EvalReport",
    "auc_score",
    "closed_set",
    "compare_reduced",
    "construct_separator",
    "cross_evaluate",
    "displacement",
    "evaluate",
    "gbt_importance",
    "permutation_importance",
    "reduce_features",
    "roc_curve",
    "separation_ratio",
]
