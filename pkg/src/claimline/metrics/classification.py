"""Classification measures: macro P/R/F1, filter rates, Youden thresholding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")


def macro_prf(gold: Sequence[Hashable], pred: Sequence[Hashable]) -> tuple[float, float, float]:
    """(macro F1, macro precision, macro recall) over gold-present classes.

    A class never predicted has precision 0; classes absent from gold are
    excluded from the averages entirely (their recall is undefined).
    """
    if len(gold) != len(pred):
        raise ValueError(f"length mismatch: {len(gold)} gold vs {len(pred)} predicted")
    if not gold:
        raise ValueError("empty label sequences")
    classes = sorted({str(c) for c in gold})
    f1s, precisions, recalls = [], [], []
    for cls in classes:
        tp = sum(1 for g, p in zip(gold, pred) if str(g) == cls and str(p) == cls)
        fp = sum(1 for g, p in zip(gold, pred) if str(g) != cls and str(p) == cls)
        fn = sum(1 for g, p in zip(gold, pred) if str(g) == cls and str(p) != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn)  # tp + fn > 0 because cls occurs in gold
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        precisions.append(precision)
        recalls.append(recall)
        f1s.append(f1)
    n = len(classes)
    return sum(f1s) / n, sum(precisions) / n, sum(recalls) / n


def tnr_fnr(c: ConfusionCounts) -> tuple[float | None, float | None]:
    """(true negative rate, false negative rate); None marks an undefined rate."""
    tnr = c.tn / (c.tn + c.fp) if c.tn + c.fp > 0 else None
    fnr = c.fn / (c.fn + c.tp) if c.fn + c.tp > 0 else None
    return tnr, fnr


def youden_threshold(scores: Sequence[float], labels: Sequence[bool]) -> tuple[float, float]:
    """Threshold maximizing Youden's J = TPR + TNR - 1.

    Candidates are the midpoints between adjacent distinct sorted scores
    plus -inf and +inf; an item is predicted positive when its score is
    >= the threshold. Ties on J resolve to the smallest threshold; the
    comparison is exact (integer arithmetic), so equal-J candidates are
    never reordered by float rounding.
    """
    if len(scores) != len(labels):
        raise ValueError("scores and labels must have equal length")
    n_pos = sum(1 for lab in labels if lab)
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("both classes must be present")

    pos_at: dict[float, int] = {}
    neg_at: dict[float, int] = {}
    for score, label in zip(scores, labels):
        score = float(score)
        if label:
            pos_at[score] = pos_at.get(score, 0) + 1
        else:
            neg_at[score] = neg_at.get(score, 0) + 1
    distinct = sorted(set(pos_at) | set(neg_at))

    # Walk candidates in ascending order, flipping one score group per step.
    # J = tp/n_pos + tn/n_neg - 1 is compared via the integer numerator
    # tp*n_neg + tn*n_pos over the common denominator n_pos*n_neg.
    tp, tn = n_pos, 0
    best_threshold = -math.inf
    best_num = tp * n_neg + tn * n_pos
    for i, value in enumerate(distinct):
        tp -= pos_at.get(value, 0)
        tn += neg_at.get(value, 0)
        threshold = (value + distinct[i + 1]) / 2.0 if i + 1 < len(distinct) else math.inf
        num = tp * n_neg + tn * n_pos
        if num > best_num:
            best_threshold, best_num = threshold, num
    return best_threshold, best_num / (n_pos * n_neg) - 1.0
