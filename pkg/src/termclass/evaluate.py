"""Confusion-matrix metrics: accuracy, per-class and averaged P/R/F.

Macro averages (unweighted means over classes) are the headline numbers;
micro variants are computed alongside for transparency. Zero denominators
yield 0 and the affected classes are flagged in the report so sweeps never
abort on a degenerate split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass
class EvaluationReport:
    """Metrics for one prediction run. ``confusion[a][b]`` counts true class a
    predicted as class b."""

    confusion: np.ndarray
    accuracy: float
    precision: np.ndarray
    recall: np.ndarray
    f_measure: np.ndarray
    macro_precision: float
    macro_recall: float
    macro_f_measure: float
    micro_precision: float
    micro_recall: float
    micro_f_measure: float
    undefined_precision_classes: tuple[int, ...]
    undefined_recall_classes: tuple[int, ...]

    @property
    def k(self) -> int:
        return self.confusion.shape[0]

    def as_dict(self) -> dict:
        return {
            "confusion": self.confusion.tolist(),
            "accuracy": self.accuracy,
            "per_class": {
                "precision": self.precision.tolist(),
                "recall": self.recall.tolist(),
                "f_measure": self.f_measure.tolist(),
            },
            "macro": {
                "precision": self.macro_precision,
                "recall": self.macro_recall,
                "f_measure": self.macro_f_measure,
            },
            "micro": {
                "precision": self.micro_precision,
                "recall": self.micro_recall,
                "f_measure": self.micro_f_measure,
            },
            "undefined_precision_classes": list(self.undefined_precision_classes),
            "undefined_recall_classes": list(self.undefined_recall_classes),
        }


def evaluate(y_true, y_pred, k: int) -> EvaluationReport:
    """Score predictions against true class indices in [0, k)."""
    t = np.asarray(y_true, dtype=np.int64)
    p = np.asarray(y_pred, dtype=np.int64)
    if t.shape != p.shape or t.ndim != 1 or len(t) == 0:
        raise DataError(
            f"y_true and y_pred must be equal-length nonempty vectors, "
            f"got shapes {t.shape} and {p.shape}"
        )
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    for name, arr in (("y_true", t), ("y_pred", p)):
        if arr.min() < 0 or arr.max() >= k:
            raise DataError(f"{name} contains indices outside [0, {k})")

    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (t, p), 1)

    tp = np.diag(confusion).astype(np.float64)
    pred_totals = confusion.sum(axis=0).astype(np.float64)
    true_totals = confusion.sum(axis=1).astype(np.float64)

    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(pred_totals > 0, tp / np.where(pred_totals > 0, pred_totals, 1), 0.0)
        recall = np.where(true_totals > 0, tp / np.where(true_totals > 0, true_totals, 1), 0.0)
        pr = precision + recall
        f_measure = np.where(pr > 0, 2.0 * precision * recall / np.where(pr > 0, pr, 1), 0.0)

    total = len(t)
    correct = float(tp.sum())
    micro_p = correct / float(pred_totals.sum())
    micro_r = correct / float(true_totals.sum())
    micro_f = 2 * micro_p * micro_r / (micro_p + micro_r) if micro_p + micro_r > 0 else 0.0

    return EvaluationReport(
        confusion=confusion,
        accuracy=correct / total,
        precision=precision,
        recall=recall,
        f_measure=f_measure,
        macro_precision=float(precision.mean()),
        macro_recall=float(recall.mean()),
        macro_f_measure=float(f_measure.mean()),
        micro_precision=micro_p,
        micro_recall=micro_r,
        micro_f_measure=micro_f,
        undefined_precision_classes=tuple(np.flatnonzero(pred_totals == 0).tolist()),
        undefined_recall_classes=tuple(np.flatnonzero(true_totals == 0).tolist()),
    )
