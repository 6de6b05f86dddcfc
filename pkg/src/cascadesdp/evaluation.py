"""Confusion-matrix metrics and the stratified cross-validation driver.

Metrics are computed on predictions pooled across all folds (one number
per dataset-model pair); per-fold values are kept for diagnostics.
Degenerate cases follow fixed conventions, each recorded as a flag:
F-measure is 0 when there are no true positives, MCC is 0 when a
denominator factor vanishes, and AUC is 0.5 when the scored pool lacks
one of the classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cascade import CGConfig, cg_label, fit_any
from .datasets import Dataset, stratified_folds, subset
from .learners import ClassifierSpec, model_label
from .seeding import derive_seed

__all__ = [
    "ConfusionMatrix",
    "MetricSet",
    "EvaluationReport",
    "confusion_matrix",
    "accuracy",
    "f_measure",
    "mcc",
    "auc",
    "compute_metrics",
    "cross_validate",
]


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with class 1 (defective) as the positive class."""

    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("counts must be non-negative")
        if self.total < 1:
            raise ValueError("at least one scored instance required")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricSet:
    accuracy: float
    f_measure: float
    auc: float
    mcc: float
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError("accuracy out of range")
        if not 0.0 <= self.f_measure <= 1.0:
            raise ValueError("f_measure out of range")
        if not 0.0 <= self.auc <= 1.0:
            raise ValueError("auc out of range")
        if not -1.0 <= self.mcc <= 1.0:
            raise ValueError("mcc out of range")


@dataclass(frozen=True)
class EvaluationReport:
    dataset: str
    model: str
    seed: int
    k: int
    metrics: MetricSet
    fold_metrics: tuple[MetricSet, ...]
    pooled: ConfusionMatrix
    labels: np.ndarray = field(repr=False)
    predictions: np.ndarray = field(repr=False)
    scores: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.pooled.total != self.labels.shape[0]:
            raise ValueError("pooled confusion matrix must cover every instance once")


def confusion_matrix(y_true, y_pred) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ValueError("label sequences must be 1-D and of equal length")
    if y_true.size < 1:
        raise ValueError("at least one instance required")
    for arr in (y_true, y_pred):
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
    return ConfusionMatrix(
        tp=int(((y_true == 1) & (y_pred == 1)).sum()),
        fp=int(((y_true == 0) & (y_pred == 1)).sum()),
        fn=int(((y_true == 1) & (y_pred == 0)).sum()),
        tn=int(((y_true == 0) & (y_pred == 0)).sum()),
    )


def accuracy(cm: ConfusionMatrix) -> float:
    return (cm.tp + cm.tn) / cm.total


def f_measure(cm: ConfusionMatrix) -> float:
    """Harmonic mean of precision and recall; 0 when tp is 0."""
    if cm.tp == 0:
        return 0.0
    precision = cm.tp / (cm.tp + cm.fp)
    recall = cm.tp / (cm.tp + cm.fn)
    return 2.0 * precision * recall / (precision + recall)


def mcc(cm: ConfusionMatrix) -> float:
    """Matthews correlation; 0 when any denominator factor is 0."""
    denom = (
        (cm.tp + cm.fp) * (cm.tp + cm.fn) * (cm.tn + cm.fp) * (cm.tn + cm.fn)
    )
    if denom == 0:
        return 0.0
    return (cm.tp * cm.tn - cm.fp * cm.fn) / np.sqrt(float(denom))


def _average_ranks(scores: np.ndarray) -> np.ndarray:
    """1-based ranks with ties averaged."""
    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(scores.shape[0], dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < scores.shape[0]:
        j = i
        while j + 1 < scores.shape[0] and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def auc(y_true, scores) -> float:
    """Mann-Whitney AUC: fraction of (positive, negative) pairs ranked
    correctly, ties counting half; 0.5 when a class is absent."""
    y_true = np.asarray(y_true, dtype=np.int64)
    scores = np.asarray(scores, dtype=np.float64)
    if y_true.shape != scores.shape or y_true.ndim != 1:
        raise ValueError("labels and scores must be 1-D and of equal length")
    n_pos = int((y_true == 1).sum())
    n_neg = int((y_true == 0).sum())
    if n_pos == 0 or n_neg == 0:
        return 0.5
    ranks = _average_ranks(scores)
    rank_sum = ranks[y_true == 1].sum()
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def compute_metrics(y_true, y_pred, scores) -> MetricSet:
    """All four metrics plus degenerate-case flags."""
    cm = confusion_matrix(y_true, y_pred)
    flags = []
    if cm.tp == 0:
        flags.append("f_measure:no-true-positives")
    if (cm.tp + cm.fp) * (cm.tp + cm.fn) * (cm.tn + cm.fp) * (cm.tn + cm.fn) == 0:
        flags.append("mcc:zero-denominator")
    if cm.tp + cm.fn == 0 or cm.tn + cm.fp == 0:
        flags.append("auc:single-class-pool")
    return MetricSet(
        accuracy=accuracy(cm),
        f_measure=f_measure(cm),
        auc=auc(y_true, scores),
        mcc=mcc(cm),
        flags=tuple(flags),
    )


def cross_validate(
    spec: ClassifierSpec | CGConfig, data: Dataset, k: int = 10, seed: int = 0
) -> EvaluationReport:
    """Stratified k-fold CV: train on each fold's complement, score the
    fold, pool all predictions, then compute the pooled metrics.

    Fold-level training seeds derive from (seed, fold index), so a report
    is a pure function of (spec, data, k, seed).  A fold whose training
    fails aborts the whole report.
    """
    plan = stratified_folds(data, k, seed)
    n = data.n_instances
    predictions = np.full(n, -1, dtype=np.int64)
    scores = np.full(n, np.nan, dtype=np.float64)
    fold_metrics = []
    for f in range(k):
        test_idx = plan.folds[f]
        train_idx = plan.complement(f)
        model = fit_any(spec, subset(data, train_idx), derive_seed(seed, f))
        probs = model.predict_proba(data.features[test_idx])
        fold_pred = (probs[:, 1] > probs[:, 0]).astype(np.int64)
        predictions[test_idx] = fold_pred
        scores[test_idx] = probs[:, 1]
        fold_metrics.append(compute_metrics(data.labels[test_idx], fold_pred, probs[:, 1]))

    label = cg_label(spec) if isinstance(spec, CGConfig) else model_label(spec)
    pooled_metrics = compute_metrics(data.labels, predictions, scores)
    return EvaluationReport(
        dataset=data.name,
        model=label,
        seed=seed,
        k=k,
        metrics=pooled_metrics,
        fold_metrics=tuple(fold_metrics),
        pooled=confusion_matrix(data.labels, predictions),
        labels=data.labels,
        predictions=predictions,
        scores=scores,
    )
