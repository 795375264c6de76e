"""Brute-force references for the closed-form bounds.

Everything here recomputes its target quantity from first principles:
orderings are enumerated, labelings are enumerated, and sample pairs are
counted one by one.  No code is shared with the closed-form implementations;
agreement on small instances is the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from .dataset import PatternTable
from .splits import SplitTable

__all__ = [
    "OracleBudget",
    "BudgetError",
    "brute_best_auc",
    "brute_best_accuracy",
    "brute_min_hinge",
    "brute_best_pr_area",
    "brute_min_delta",
    "mc_expected",
]


class BudgetError(ValueError):
    """Enumeration would exceed the configured budget."""


@dataclass(frozen=True)
class OracleBudget:
    max_patterns: int = 8   # d! orderings
    max_labelings: int = 12  # 2^d labelings
    max_outcomes: int = 10**6


def _pairwise_auc(order, entries, n_plus, n_minus) -> float:
    """AUC of a pattern ordering by direct sample-pair counting."""
    concordant = 0.0
    for i, key_i in enumerate(order):
        p_i, n_i = entries[key_i]
        # ties within one pattern: half credit
        concordant += 0.5 * p_i * n_i
        for key_j in order[i + 1:]:
            _, n_j = entries[key_j]
            # positive ranked above negative
            concordant += p_i * n_j
    return concordant / (n_plus * n_minus)


def brute_best_auc(table: PatternTable, budget: OracleBudget = OracleBudget()):
    """Max AUC over all pattern orderings, with an argmax ordering."""
    if table.n_plus == 0 or table.n_minus == 0:
        raise ValueError("single-class table")
    keys = table.sorted_patterns()
    if len(keys) > budget.max_patterns:
        raise BudgetError(f"{len(keys)} patterns exceed ordering budget")
    best, best_order = -1.0, None
    for order in permutations(keys):
        auc = _pairwise_auc(order, table.entries, table.n_plus, table.n_minus)
        if auc > best:
            best, best_order = auc, order
    return best, best_order


def brute_best_accuracy(table: PatternTable, budget: OracleBudget = OracleBudget()) -> float:
    """Max accuracy over all +/-1 pattern labelings."""
    keys = table.sorted_patterns()
    if len(keys) > budget.max_labelings:
        raise BudgetError(f"{len(keys)} patterns exceed labeling budget")
    best = 0
    for labels in product((+1, -1), repeat=len(keys)):
        correct = sum(p if f > 0 else n
                      for f, (p, n) in zip(labels, (table.entries[k] for k in keys)))
        best = max(best, correct)
    return best / table.m


def brute_min_hinge(table: PatternTable, budget: OracleBudget = OracleBudget()) -> float:
    """Min hinge loss over all +/-1 pattern labelings."""
    keys = table.sorted_patterns()
    if len(keys) > budget.max_labelings:
        raise BudgetError(f"{len(keys)} patterns exceed labeling budget")
    best = table.m
    for labels in product((+1, -1), repeat=len(keys)):
        loss = sum(n if f > 0 else p
                   for f, (p, n) in zip(labels, (table.entries[k] for k in keys)))
        best = min(best, loss)
    return best / table.m


def _pr_area_of_order(order, entries, n_plus) -> float:
    """Literal per-sample PR summation for one pattern ordering.

    Uses the convention that the precision before the first sample equals the
    first sample's positive fraction.
    """
    seq = []
    for key in order:
        p, n = entries[key]
        seq.extend([p / (p + n)] * (p + n))
    area = 0.0
    running = 0.0
    for i, w in enumerate(seq, start=1):
        prev_precision = seq[0] if i == 1 else running / (i - 1)
        running += w
        precision = running / i
        area += w / (2 * n_plus) * (prev_precision + precision)
    return area


def brute_best_pr_area(table: PatternTable, budget: OracleBudget = OracleBudget()) -> float:
    """Max PR area over all pattern orderings."""
    if table.n_plus == 0 or table.n_minus == 0:
        raise ValueError("single-class table")
    keys = table.sorted_patterns()
    if len(keys) > budget.max_patterns:
        raise BudgetError(f"{len(keys)} patterns exceed ordering budget")
    return max(_pr_area_of_order(order, table.entries, table.n_plus)
               for order in permutations(keys))


def brute_min_delta(split: SplitTable, budget: OracleBudget = OracleBudget()) -> float:
    """Min over all labelings of (train gap + test gap), m-normalized."""
    keys = split.sorted_patterns()
    if len(keys) > budget.max_labelings:
        raise BudgetError(f"{len(keys)} patterns exceed labeling budget")
    best = None
    for labels in product((+1, -1), repeat=len(keys)):
        total = 0
        for f, key in zip(labels, keys):
            pt, nt, pe, ne = split.entries[key]
            if f > 0:
                total += max(nt - pt, 0) + max(ne - pe, 0)
            else:
                total += max(pt - nt, 0) + max(pe - ne, 0)
        if best is None or total < best:
            best = total
    return best / split.m


def mc_expected(table: PatternTable, p: float, trials: int, seed: int) -> dict:
    """Monte Carlo estimates of the random-division expectations.

    Returns {"min_hinge", "ac_upper", "delta"}, each as (estimate, stderr),
    averaging the per-split exact quantities over seeded Bernoulli divisions.
    """
    if trials < 10**3:
        raise ValueError("need at least 1000 trials")
    if not 0 < p < 1:
        raise ValueError("division ratio must be in (0, 1)")
    rng = np.random.default_rng(seed)
    pos, neg = table.counts()
    m = table.m

    pos_train = rng.binomial(pos[None, :], p, size=(trials, len(pos)))
    neg_train = rng.binomial(neg[None, :], p, size=(trials, len(neg)))
    pos_test = pos[None, :] - pos_train
    neg_test = neg[None, :] - neg_train

    min_hinge = np.minimum(pos_train, neg_train).sum(axis=1) / (m * p)
    ac_upper = np.maximum(pos_test, neg_test).sum(axis=1) / (m * (1 - p))

    q_train = pos_train - neg_train
    q_test = pos_test - neg_test
    eps = np.minimum(np.abs(q_train), np.abs(q_test))
    delta = np.where(q_train * q_test >= 0, 0, eps).sum(axis=1) / m

    def stat(x):
        return float(x.mean()), float(x.std(ddof=1) / math.sqrt(trials))

    return {"min_hinge": stat(min_hinge),
            "ac_upper": stat(ac_upper),
            "delta": stat(delta)}
