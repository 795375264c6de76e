"""Exact performance ceilings of a pattern table.

All quantities are functions of the per-pattern counts (P(x), N(x)) only:
the AUC-ROC ceiling, the AUC-PR ceiling, the accuracy ceiling, the minimum
square/hinge/softmax losses, the per-pattern optimal scores, and the optimal
ROC/PR curve geometry.  Integer pair sums are kept in exact (arbitrary
precision) arithmetic until the final division.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import PatternTable

__all__ = [
    "BoundsReport",
    "PatternScore",
    "CurvePoints",
    "SingleClassError",
    "auc_roc_upper",
    "auc_roc_upper_pairwise",
    "ranking_auc",
    "auc_pr_upper",
    "accuracy_upper",
    "min_loss",
    "optimal_scores",
    "optimal_roc_curve",
    "optimal_pr_curve",
    "bounds_report",
]


class SingleClassError(ValueError):
    """Bound undefined: the table contains only one class."""


@dataclass(frozen=True)
class PatternScore:
    pattern: tuple
    p_plus: float
    f_star: float
    weight: int  # multiplicity P + N

    @property
    def predicted_label(self) -> int:
        # f* = 0 classifies as +1
        return +1 if self.f_star >= 0 else -1


@dataclass(frozen=True)
class CurvePoints:
    kind: str  # "ROC" | "PR"
    points: tuple  # ordered (x, y) vertices
    area: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["fpr", "tpr"] if self.kind == "ROC" else ["recall", "precision"])
        for x, y in self.points:
            writer.writerow([repr(float(x)), repr(float(y))])
        return buf.getvalue()


@dataclass(frozen=True)
class BoundsReport:
    ar_upper: float
    ap_upper: float
    ac_upper: float
    min_square: float
    min_hinge: float
    min_softmax: float
    overlap: float
    n_plus: int
    n_minus: int
    m: int
    d: int

    def to_json(self) -> str:
        # 17 significant digits so a re-parse round-trips bit-exactly
        return json.dumps(
            {k: (float(repr(v)) if isinstance(v, float) else v)
             for k, v in self.__dict__.items()}, indent=2)


def _require_both_classes(table: PatternTable):
    if table.n_plus == 0 or table.n_minus == 0:
        raise SingleClassError("bound undefined: table contains a single class")


def _sorted_counts(table: PatternTable):
    """Per-pattern counts sorted by p_+ descending, ties in canonical order."""
    keys = table.sorted_patterns()
    keys.sort(key=lambda k: -table.entries[k][0] / sum(table.entries[k]))
    pos = np.array([table.entries[k][0] for k in keys], dtype=np.int64)
    neg = np.array([table.entries[k][1] for k in keys], dtype=np.int64)
    return keys, pos, neg


def auc_roc_upper(table: PatternTable) -> float:
    """Exact ceiling of AUC-ROC over all classifiers.

    Computed in O(d log d) via the p_+-descending prefix-sum form; agrees with
    the O(d^2) pairwise evaluation exactly (see auc_roc_upper_pairwise).
    """
    _require_both_classes(table)
    _, pos, neg = _sorted_counts(table)
    # in descending p_+ order, max{P_i N_j, P_j N_i} = P_i N_j for i before j
    pos_l = [int(p) for p in pos]
    neg_l = [int(n) for n in neg]
    prefix_pos = 0
    twice_sum = 0
    for p, n in zip(pos_l, neg_l):
        twice_sum += 2 * prefix_pos * n + p * n
        prefix_pos += p
    return twice_sum / (2 * table.n_plus * table.n_minus)


def auc_roc_upper_pairwise(table: PatternTable) -> float:
    """O(d^2) literal evaluation of the pairwise max formula."""
    _require_both_classes(table)
    pos, neg = table.counts()
    pos_l = [int(p) for p in pos]
    neg_l = [int(n) for n in neg]
    total = 0
    d = len(pos_l)
    for i in range(d):
        for j in range(d):
            total += max(pos_l[i] * neg_l[j], pos_l[j] * neg_l[i])
    return total / (2 * table.n_plus * table.n_minus)


def ranking_auc(table: PatternTable, ordering: Sequence) -> float:
    """AUC of any classifier that ranks patterns in the given order.

    `ordering` lists every pattern exactly once, highest score first.
    Within-pattern sample pairs count as ties (half credit).
    """
    _require_both_classes(table)
    order = list(ordering)
    if sorted(order, key=repr) != sorted(table.entries, key=repr) or \
            len(order) != len(table.entries):
        raise ValueError("ordering must be a permutation of all patterns")
    twice_sum = 0
    prefix_pos = 0
    for key in order:
        p, n = table.entries[key]
        twice_sum += 2 * prefix_pos * n + p * n
        prefix_pos += p
    return twice_sum / (2 * table.n_plus * table.n_minus)


def _pr_sample_arrays(table: PatternTable):
    """Sample-level p_+ sequence in optimal order, expanded by pattern runs."""
    _, pos, neg = _sorted_counts(table)
    weight = pos + neg
    p_plus = pos / weight
    return np.repeat(p_plus, weight)


def auc_pr_upper(table: PatternTable) -> float:
    """Exact ceiling of AUC-PR over all classifiers.

    Trapezoidal area of the optimal sample-level PR sequence with the
    starting-precision convention precision_0 = p_+ of the top pattern.
    """
    _require_both_classes(table)
    seq = _pr_sample_arrays(table)
    cum = np.cumsum(seq)
    k = np.arange(1, len(seq) + 1)
    recall = cum / table.n_plus
    precision = cum / k
    prev_recall = np.concatenate(([0.0], recall[:-1]))
    prev_precision = np.concatenate(([seq[0]], precision[:-1]))
    return float(np.sum((recall - prev_recall) * (precision + prev_precision) / 2))


def accuracy_upper(table: PatternTable) -> float:
    """Ceiling of accuracy: (1/m) sum of max{P, N}; equals 1 - min hinge."""
    if table.m < 1:
        raise ValueError("empty table")
    pos, neg = table.counts()
    return int(np.maximum(pos, neg).sum()) / table.m


def min_loss(table: PatternTable, kind: str) -> float:
    """Minimum achievable loss over all classifiers.

    kind: "square", "hinge", or "softmax" (natural log).
    """
    if table.m < 1:
        raise ValueError("empty table")
    pos, neg = table.counts()
    if kind == "square":
        return float(4 * np.sum(pos * neg / (pos + neg)) / table.m)
    if kind == "hinge":
        return int(np.minimum(pos, neg).sum()) / table.m
    if kind == "softmax":
        total = pos + neg
        with np.errstate(divide="ignore", invalid="ignore"):
            term_p = np.where(pos > 0, pos * np.log(np.where(pos > 0, pos, 1) / total), 0.0)
            term_n = np.where(neg > 0, neg * np.log(np.where(neg > 0, neg, 1) / total), 0.0)
        return float(-(term_p.sum() + term_n.sum()) / table.m)
    raise ValueError(f"unknown loss kind {kind!r}")


def optimal_scores(table: PatternTable) -> list[PatternScore]:
    """Per-pattern universal optimal classifier, p_+-descending order.

    f* = (P - N) / (P + N); the induced order attains the AUC-ROC and AUC-PR
    ceilings, and sign(f*) (with 0 mapped to +1) attains the accuracy ceiling.
    """
    if table.m < 1:
        raise ValueError("empty table")
    keys, pos, neg = _sorted_counts(table)
    return [
        PatternScore(pattern=k,
                     p_plus=int(p) / int(p + n),
                     f_star=(int(p) - int(n)) / int(p + n),
                     weight=int(p + n))
        for k, p, n in zip(keys, pos, neg)
    ]


def optimal_roc_curve(table: PatternTable) -> CurvePoints:
    """Optimal (concave) ROC curve: origin plus one vertex per pattern."""
    _require_both_classes(table)
    _, pos, neg = _sorted_counts(table)
    fpr = np.concatenate(([0.0], np.cumsum(neg) / table.n_minus))
    tpr = np.concatenate(([0.0], np.cumsum(pos) / table.n_plus))
    area = float(np.sum((fpr[1:] - fpr[:-1]) * (tpr[1:] + tpr[:-1]) / 2))
    points = tuple((float(x), float(y)) for x, y in zip(fpr, tpr))
    return CurvePoints(kind="ROC", points=points, area=area)


def optimal_pr_curve(table: PatternTable) -> CurvePoints:
    """Optimal PR curve vertices, one per pattern, in p_+-descending order.

    The reported area is the exact sample-level AUC-PR ceiling.  Within a
    pattern run precision varies hyperbolically with recall, so the
    straight-line polygon through the pattern vertices slightly overestimates
    the area; the exact value is reported instead of the polygon integral.
    """
    _require_both_classes(table)
    _, pos, neg = _sorted_counts(table)
    weight = pos + neg
    p_plus = pos / weight
    cum = np.cumsum(p_plus * weight)
    k = np.cumsum(weight)
    recall = np.concatenate(([0.0], cum / table.n_plus))
    precision = np.concatenate(([p_plus[0]], cum / k))
    points = tuple((float(x), float(y)) for x, y in zip(recall, precision))
    return CurvePoints(kind="PR", points=points, area=auc_pr_upper(table))


def bounds_report(table: PatternTable) -> BoundsReport:
    """All ceilings and minimum losses of one table, mutually consistent."""
    from .overlap import overlap_index

    _require_both_classes(table)
    return BoundsReport(
        ar_upper=auc_roc_upper(table),
        ap_upper=auc_pr_upper(table),
        ac_upper=accuracy_upper(table),
        min_square=min_loss(table, "square"),
        min_hinge=min_loss(table, "hinge"),
        min_softmax=min_loss(table, "softmax"),
        overlap=overlap_index(table),
        n_plus=table.n_plus,
        n_minus=table.n_minus,
        m=table.m,
        d=table.d,
    )
