"""Stratified k-fold cross-validation, confusion matrices and per-class metrics."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .data import NOMINAL, Dataset
from .runtime import RunCancelled, checkpoint


def stratified_folds(ds: Dataset, k: int = 10, seed: int = 1) -> np.ndarray:
    """Assign each instance a fold index in [0, k).

    Construction: seeded uniform shuffle, stable regrouping by class label,
    then position p of the regrouped order goes to fold p mod k. Fold sizes
    and per-class fold counts both differ by at most one by construction.
    """
    n = ds.n_instances
    if not 2 <= k <= n:
        raise ValueError(f"fold count {k} out of range for {n} instances")
    if ds.class_attribute.kind != NOMINAL:
        raise ValueError("stratification requires a nominal class attribute")
    codes = ds.class_codes()

    rng = np.random.default_rng(seed)
    shuffled = rng.permutation(n)
    regrouped = shuffled[np.argsort(codes[shuffled], kind="stable")]

    folds = np.empty(n, dtype=np.intp)
    folds[regrouped] = np.arange(n) % k
    return folds


@dataclass
class ClassMetrics:
    label: str
    precision: float
    recall: float
    f1: float


@dataclass
class EvaluationReport:
    algorithm: str
    params: dict
    seed: int
    folds: int
    class_labels: tuple
    confusion: np.ndarray
    per_class: list[ClassMetrics] = field(default_factory=list)
    build_time_s: float = 0.0
    cv_time_s: float = 0.0
    model_text: str = ""

    @property
    def accuracy(self):
        total = self.confusion.sum()
        if total == 0:
            return 0.0
        return 100.0 * float(np.trace(self.confusion)) / float(total)


def compute_metrics(confusion) -> dict:
    """Accuracy plus per-class precision/recall/F1 from a confusion matrix.

    Empty predicted columns give precision 0, empty actual rows give recall 0,
    and F1 is 0 whenever precision + recall is 0.
    """
    cm = np.asarray(confusion, dtype=np.float64)
    diag = np.diag(cm)
    col_tot = cm.sum(axis=0)
    row_tot = cm.sum(axis=1)
    precision = np.divide(diag, col_tot, out=np.zeros_like(diag), where=col_tot > 0)
    recall = np.divide(diag, row_tot, out=np.zeros_like(diag), where=row_tot > 0)
    pr = precision + recall
    f1 = np.divide(2 * precision * recall, pr, out=np.zeros_like(diag), where=pr > 0)
    total = cm.sum()
    accuracy = 100.0 * float(diag.sum()) / float(total) if total > 0 else 0.0
    return {
        "accuracy": accuracy,
        "precision": precision,
        "recall": recall,
        "f1": f1,
    }


class FoldTrainingError(RuntimeError):
    """Training failed inside cross-validation; carries the fold index."""

    def __init__(self, fold, cause):
        super().__init__(f"training failed on fold {fold}: {cause}")
        self.fold = fold
        self.cause = cause


def cross_validate(train, ds: Dataset, k: int = 10, seed: int = 1, ctx=None,
                   algorithm: str = "", params: dict | None = None) -> EvaluationReport:
    """Stratified k-fold CV of a classifier trainer.

    ``train(dataset, seed, ctx)`` must return a model exposing
    ``predict_proba(row) -> distribution`` and ``describe() -> str``.
    Each fold trains on the other k-1 folds with derived seed ``seed + fold``;
    a final full-data build supplies build_time_s and the rendered model.
    """
    if ds.class_attribute.kind != NOMINAL:
        raise ValueError("class attribute must be nominal")
    labels = ds.class_attribute.values
    n_classes = len(labels)
    folds = stratified_folds(ds, k, seed)
    codes = ds.class_codes()

    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    t0 = time.perf_counter()
    for f in range(k):
        checkpoint(ctx)
        test_rows = np.nonzero(folds == f)[0]
        train_rows = np.nonzero(folds != f)[0]
        try:
            model = train(ds.subset(train_rows), seed + f, ctx)
        except RunCancelled:
            raise
        except Exception as exc:
            raise FoldTrainingError(f, exc) from exc
        for i in test_rows:
            dist = model.predict_proba(ds.X[i])
            pred = int(np.argmax(dist))
            confusion[codes[i], pred] += 1
        if ctx is not None:
            ctx.set_progress((f + 1) / (k + 1))
    cv_time = time.perf_counter() - t0

    checkpoint(ctx)
    t0 = time.perf_counter()
    full_model = train(ds, seed, ctx)
    build_time = time.perf_counter() - t0
    if ctx is not None:
        ctx.set_progress(1.0)

    metrics = compute_metrics(confusion)
    report = EvaluationReport(
        algorithm=algorithm,
        params=dict(params or {}),
        seed=seed,
        folds=k,
        class_labels=labels,
        confusion=confusion,
        build_time_s=build_time,
        cv_time_s=cv_time,
        model_text=full_model.describe(),
    )
    report.per_class = [
        ClassMetrics(labels[c], float(metrics["precision"][c]),
                     float(metrics["recall"][c]), float(metrics["f1"][c]))
        for c in range(n_classes)
    ]
    return report
