"""Cross-validation splitters and the evaluation harness.

Standardization is refitted inside every fold on the training rows only, so
nothing about a fold's test rows can influence its preprocessing or model.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import clone

from .errors import AllFoldsSkipped, BadK, TooFewInstances
from .features import FeatureMatrix
from .metrics import RocCurve, accuracy, confusion_matrix, ovr_roc
from .preprocess import ZScoreScaler


class StratificationDegraded(UserWarning):
    """Raised as a warning when some class has fewer members than folds."""


@dataclass(frozen=True)
class Split:
    train_idx: np.ndarray
    test_idx: np.ndarray


def loocv_splits(n_instances: int) -> list[Split]:
    """Each instance serves once as the whole test set."""
    n = int(n_instances)
    if n < 2:
        raise TooFewInstances(f"leave-one-out needs >= 2 instances, got {n}")
    all_idx = np.arange(n)
    return [
        Split(train_idx=np.delete(all_idx, i), test_idx=np.array([i]))
        for i in range(n)
    ]


def leave_one_group_out_splits(group_ids: list[str]) -> list[Split]:
    """One fold per distinct group (sorted), testing that group's instances."""
    groups = np.asarray(group_ids)
    uniq = np.unique(groups)
    if uniq.size < 2:
        raise TooFewInstances(f"leave-one-group-out needs >= 2 groups, got {uniq.size}")
    all_idx = np.arange(groups.size)
    return [
        Split(train_idx=all_idx[groups != g], test_idx=all_idx[groups == g])
        for g in uniq
    ]


def kfold_splits(labels, k: int, seed: int, stratified: bool = True) -> list[Split]:
    """Seeded shuffle followed by round-robin fold assignment.

    Stratified mode deals each class separately, carrying the round-robin
    position across classes so fold sizes stay within one of each other.
    When a class has fewer members than k the split degrades to unstratified
    and a StratificationDegraded warning is issued.
    """
    y = np.asarray(labels, dtype=np.int64)
    n = y.shape[0]
    k = int(k)
    if k < 2 or k > n:
        raise BadK(f"k must lie in [2, {n}], got {k}")
    rng = np.random.default_rng(seed)

    if stratified:
        class_counts = np.bincount(y)
        feasible = all(c >= k for c in class_counts if c > 0)
        if not feasible:
            warnings.warn(
                f"a class has fewer than k={k} members; falling back to an "
                "unstratified split",
                StratificationDegraded,
                stacklevel=2,
            )
            stratified = False

    fold_of = np.empty(n, dtype=np.int64)
    if stratified:
        offset = 0
        for cls in np.unique(y):
            members = np.nonzero(y == cls)[0]
            shuffled = rng.permutation(members)
            for j, idx in enumerate(shuffled):
                fold_of[idx] = (offset + j) % k
            offset = (offset + shuffled.size) % k
    else:
        perm = rng.permutation(n)
        for j, idx in enumerate(perm):
            fold_of[idx] = j % k

    all_idx = np.arange(n)
    return [
        Split(train_idx=all_idx[fold_of != f], test_idx=all_idx[fold_of == f])
        for f in range(k)
    ]


@dataclass
class CvReport:
    """Pooled cross-validation results for one model on one matrix."""

    config: dict
    n_instances: int
    n_classes: int
    fold_accuracies: list[float]
    skipped_folds: list[int]
    accuracy_mean: float
    accuracy_std: float
    confusion: np.ndarray
    class_curves: dict[int, RocCurve]
    class_aucs: dict[int, float]
    macro_auc: float | None
    warnings: list[str] = field(default_factory=list)

    def to_json_dict(self, class_names: list[str] | None = None) -> dict:
        def cname(k: int) -> str:
            return class_names[k] if class_names else str(k)

        per_class = {}
        for k, curve in self.class_curves.items():
            per_class[cname(k)] = {
                "auc": self.class_aucs[k],
                "fpr": curve.fpr.tolist(),
                "tpr": curve.tpr.tolist(),
            }
        return {
            "config": self.config,
            "n_instances": self.n_instances,
            "n_classes": self.n_classes,
            "executed_folds": len(self.fold_accuracies),
            "skipped_folds": list(self.skipped_folds),
            "fold_accuracies": self.fold_accuracies,
            "accuracy_mean": self.accuracy_mean,
            "accuracy_std": self.accuracy_std,
            "confusion_matrix": self.confusion.tolist(),
            "per_class": per_class,
            "macro_auc": self.macro_auc,
            "warnings": list(self.warnings),
        }


def cross_validate(
    estimator,
    matrix: FeatureMatrix,
    splits: list[Split],
    scaling: bool = True,
    config: dict | None = None,
) -> CvReport:
    """Fit a fresh clone of the estimator per fold and pool the test results.

    Folds whose training rows miss one of the matrix's classes are skipped
    and recorded. Scores for ROC come from predict_proba when available,
    decision_function otherwise; models offering neither skip the ROC part.
    """
    X_all, y_all = matrix.X, matrix.y
    n = matrix.n_instances
    n_classes = int(y_all.max()) + 1
    classes_needed = np.unique(y_all)

    preds = np.full(n, -1, dtype=np.int64)
    scores = np.zeros((n, n_classes), dtype=np.float64)
    have_scores = True
    tested = np.zeros(n, dtype=bool)
    fold_accs: list[float] = []
    skipped: list[int] = []
    notes: list[str] = []

    for f, split in enumerate(splits):
        y_train = y_all[split.train_idx]
        present = np.unique(y_train)
        if present.size < classes_needed.size:
            missing = sorted(set(classes_needed.tolist()) - set(present.tolist()))
            skipped.append(f)
            notes.append(f"fold {f} skipped: training rows miss class(es) {missing}")
            continue
        X_train, X_test = X_all[split.train_idx], X_all[split.test_idx]
        if scaling:
            scaler = ZScoreScaler().fit(X_train)
            X_train = scaler.transform(X_train)
            X_test = scaler.transform(X_test)
        model = clone(estimator).fit(X_train, y_train)
        y_pred = np.asarray(model.predict(X_test), dtype=np.int64)
        preds[split.test_idx] = y_pred
        tested[split.test_idx] = True
        fold_accs.append(accuracy(y_all[split.test_idx], y_pred))
        if have_scores:
            if hasattr(model, "predict_proba"):
                s = np.asarray(model.predict_proba(X_test), dtype=np.float64)
            elif hasattr(model, "decision_function"):
                s = np.asarray(model.decision_function(X_test), dtype=np.float64)
            else:
                have_scores = False
                continue
            if s.shape[1] == n_classes:
                scores[split.test_idx] = s
            else:
                have_scores = False

    if not fold_accs:
        raise AllFoldsSkipped(
            f"all {len(splits)} folds were skipped; labels are too sparse per class"
        )

    cm = confusion_matrix(y_all[tested], preds[tested], n_classes)
    class_curves: dict[int, RocCurve] = {}
    class_aucs: dict[int, float] = {}
    macro: float | None = None
    if have_scores:
        y_tested = y_all[tested]
        if np.unique(y_tested).size == classes_needed.size:
            result = ovr_roc(scores[tested], y_tested)
            class_curves, class_aucs = result.curves, result.aucs
            macro = result.macro_auc
        else:
            notes.append("ROC omitted: pooled test rows do not cover every class")
    else:
        notes.append("ROC omitted: model exposes no per-class scores")

    accs = np.asarray(fold_accs)
    return CvReport(
        config=dict(config or {}),
        n_instances=n,
        n_classes=n_classes,
        fold_accuracies=[float(a) for a in fold_accs],
        skipped_folds=skipped,
        accuracy_mean=float(accs.mean()),
        accuracy_std=float(accs.std()),
        confusion=cm,
        class_curves=class_curves,
        class_aucs=class_aucs,
        macro_auc=macro,
        warnings=notes,
    )
