"""Classification and agreement metrics.

Conventions are pinned so independent implementations agree at the report
level: precision and recall are 0 when their denominator is 0, F1 is the
harmonic mean (0 when both terms are 0), and kappa for perfectly agreeing
raters is 1 even when expected agreement is also 1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .errors import PreconditionError


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise PreconditionError("confusion counts must be non-negative")


def precision_recall_f1(counts: ConfusionCounts) -> tuple[float, float, float]:
    p = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    r = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return (p, r, f1)


def cohen_kappa(pairs: Sequence[tuple[str, str]]) -> float:
    """Agreement between two raters over the same items.

    kappa = (p_o - p_e) / (1 - p_e), expected agreement from the product of
    the raters' marginal distributions.
    """
    if not pairs:
        raise PreconditionError("cohen_kappa requires at least one pair")
    n = len(pairs)
    p_o = sum(1 for a, b in pairs if a == b) / n
    left = Counter(a for a, _ in pairs)
    right = Counter(b for _, b in pairs)
    p_e = sum(left[c] * right[c] for c in set(left) | set(right)) / (n * n)
    if p_e == 1.0:
        if p_o == 1.0:
            return 1.0
        raise PreconditionError("expected agreement is 1 but observed is not")
    return (p_o - p_e) / (1 - p_e)


def fleiss_kappa(matrix: Sequence[Sequence[int]]) -> float:
    """Agreement among several raters; rows are items, columns categories.

    Every row must sum to the same rater count. Data where all ratings fall
    in a single category is defined as perfect agreement (kappa = 1).
    """
    if len(matrix) < 2:
        raise PreconditionError("fleiss_kappa requires at least two items")
    raters = sum(matrix[0])
    if raters < 2:
        raise PreconditionError("fleiss_kappa requires at least two raters")
    for row in matrix:
        if sum(row) != raters:
            raise PreconditionError("all items must have the same number of ratings")
        if min(row) < 0:
            raise PreconditionError("ratings must be non-negative")
    n = len(matrix)
    k = len(matrix[0])
    total = n * raters
    p_j = [sum(row[j] for row in matrix) / total for j in range(k)]
    p_i = [
        (sum(c * c for c in row) - raters) / (raters * (raters - 1))
        for row in matrix
    ]
    p_bar = sum(p_i) / n
    p_e = sum(p * p for p in p_j)
    if p_e == 1.0:
        return 1.0
    return (p_bar - p_e) / (1 - p_e)


@dataclass(frozen=True)
class LabelMetrics:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float


@dataclass
class MetricsReport:
    """Per-label and micro-averaged scores for one evaluation pass."""

    per_label: dict[str, LabelMetrics] = field(default_factory=dict)
    micro: LabelMetrics = LabelMetrics(0, 0, 0, 0.0, 0.0, 0.0)
    kappa: float | None = None  # model-vs-reference agreement, macro over labels
    evaluated: bool = True
    notes: list[str] = field(default_factory=list)

    @staticmethod
    def from_assignments(
        predicted: dict[str, set[str]],
        reference: dict[str, set[str]],
        label_keys: Sequence[str],
    ) -> "MetricsReport":
        """Score multi-label assignments over a common item universe.

        Micro scores count (item, label) pairs; kappa is computed per label
        on presence/absence and macro-averaged.
        """
        if not reference:
            raise PreconditionError("cannot evaluate against an empty reference pool")
        per_label: dict[str, LabelMetrics] = {}
        kappas: list[float] = []
        micro_tp = micro_fp = micro_fn = 0
        items = sorted(reference)
        for label in label_keys:
            tp = fp = fn = 0
            pairs: list[tuple[str, str]] = []
            for item in items:
                pred = label in predicted.get(item, set())
                ref = label in reference[item]
                tp += pred and ref
                fp += pred and not ref
                fn += ref and not pred
                pairs.append(("y" if pred else "n", "y" if ref else "n"))
            p, r, f1 = precision_recall_f1(ConfusionCounts(tp, fp, fn))
            per_label[label] = LabelMetrics(tp, fp, fn, p, r, f1)
            micro_tp += tp
            micro_fp += fp
            micro_fn += fn
            try:
                kappas.append(cohen_kappa(pairs))
            except PreconditionError:
                pass  # degenerate marginals; skip this label in the macro
        p, r, f1 = precision_recall_f1(ConfusionCounts(micro_tp, micro_fp, micro_fn))
        return MetricsReport(
            per_label=per_label,
            micro=LabelMetrics(micro_tp, micro_fp, micro_fn, p, r, f1),
            kappa=sum(kappas) / len(kappas) if kappas else None,
        )
