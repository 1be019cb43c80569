"""Accuracy, confusion matrices, and ROC/AUC.

ROC curves follow the classic threshold-sweep construction: instances sorted
by score descending, one curve point per distinct score (so tied scores move
the point diagonally in one step), anchored at (0, 0) and (1, 1). AUC is the
trapezoidal integral of that curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFiniteInput, OneClassOnly


def accuracy(y_true, y_pred) -> float:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise DimensionMismatch(f"shapes {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise DimensionMismatch("accuracy of zero instances")
    return float(np.mean(y_true == y_pred))


def confusion_matrix(y_true, y_pred, n_classes: int) -> np.ndarray:
    """Counts indexed [true, predicted]."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise DimensionMismatch(f"shapes {y_true.shape} vs {y_pred.shape}")
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (y_true, y_pred), 1)
    return cm


@dataclass(frozen=True)
class RocCurve:
    """Operating points swept over score thresholds, plus the thresholds."""

    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray
    positive_class: int

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def roc_curve(scores, labels, positive_class: int = 1) -> RocCurve:
    """Build a ROC curve from scores and binary membership labels.

    labels is any array where nonzero/True marks the positive class. Both
    classes must be present.
    """
    scores = np.asarray(scores, dtype=np.float64)
    pos = np.asarray(labels).astype(bool)
    if scores.shape != pos.shape or scores.ndim != 1:
        raise DimensionMismatch(f"scores {scores.shape} vs labels {pos.shape}")
    if not np.all(np.isfinite(scores)):
        raise NonFiniteInput("scores contain NaN or infinite values")
    n_pos = int(pos.sum())
    n_neg = scores.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise OneClassOnly(positive_class)

    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    p = pos[order]
    tp = np.cumsum(p)
    fp = np.cumsum(~p)
    # Keep one point per distinct score: the last index of each tie group.
    last = np.nonzero(np.append(s[1:] != s[:-1], True))[0]
    fpr = np.concatenate([[0.0], fp[last] / n_neg])
    tpr = np.concatenate([[0.0], tp[last] / n_pos])
    thresholds = np.concatenate([[np.inf], s[last]])
    return RocCurve(fpr=fpr, tpr=tpr, thresholds=thresholds, positive_class=positive_class)


def auc(curve: RocCurve) -> float:
    """Area under the curve by the trapezoid rule over fpr."""
    dx = np.diff(curve.fpr)
    mid = (curve.tpr[1:] + curve.tpr[:-1]) / 2.0
    return float(np.sum(dx * mid))


@dataclass(frozen=True)
class OvrRocResult:
    curves: dict[int, RocCurve]
    aucs: dict[int, float]
    macro_auc: float


def ovr_roc(score_matrix, labels) -> OvrRocResult:
    """One-vs-rest ROC per class from an (n, n_classes) score matrix.

    Every class column needs at least one positive and one negative label,
    otherwise OneClassOnly identifies the offender.
    """
    S = np.asarray(score_matrix, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if S.ndim != 2 or S.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"score matrix {S.shape} vs labels {y.shape}")
    curves: dict[int, RocCurve] = {}
    aucs: dict[int, float] = {}
    for k in range(S.shape[1]):
        curves[k] = roc_curve(S[:, k], y == k, positive_class=k)
        aucs[k] = auc(curves[k])
    return OvrRocResult(
        curves=curves,
        aucs=aucs,
        macro_auc=float(np.mean(list(aucs.values()))),
    )


def roc_to_csv(curve: RocCurve) -> str:
    """Render a curve as threshold,fpr,tpr CSV text."""
    lines = ["threshold,fpr,tpr"]
    for t, x, y in zip(curve.thresholds, curve.fpr, curve.tpr):
        t_txt = "inf" if np.isinf(t) else format(t, ".17g")
        lines.append(f"{t_txt},{x:.17g},{y:.17g}")
    return "\n".join(lines) + "\n"
