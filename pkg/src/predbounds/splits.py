"""Train/test tension: the joint-error lower bound and its expectations.

For a split of a pattern table into train and test counts, no classifier can
make (train hinge-loss gap) + (test accuracy gap) smaller than the bound
delta computed here.  Under Bernoulli random division the per-pattern counts
are binomial, which gives closed-form expectations for the minimum train
hinge loss, the maximum test accuracy, and delta itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .dataset import Dataset, PatternTable, Sample, build_pattern_table

__all__ = [
    "SplitTable",
    "DeltaReport",
    "split_random",
    "delta_lower_bound",
    "delta_of_classifier",
    "expected_min_hinge",
    "expected_accuracy_upper",
    "expected_delta",
]

# per-pattern cost of the exact double binomial sum is O(P*N); beyond this,
# fall back to Monte Carlo
EXACT_PRODUCT_LIMIT = 10**6
MC_TRIALS = 10**5
# below this count, binomial pmf uses exact integer coefficients
SMALL_COUNT = 30


@dataclass(frozen=True)
class SplitTable:
    """Per-pattern (P_train, N_train, P_test, N_test) quadruples."""

    entries: dict  # pattern -> (p_train, n_train, p_test, n_test)
    ratio: float | None = None

    @property
    def m(self) -> int:
        return sum(sum(q) for q in self.entries.values())

    def parent_table(self) -> PatternTable:
        return PatternTable.from_counts({
            k: (pt + pe, nt + ne) for k, (pt, nt, pe, ne) in self.entries.items()})

    def sorted_patterns(self) -> list:
        return sorted(self.entries, key=lambda k: tuple(str(t) for t in k))


@dataclass(frozen=True)
class DeltaReport:
    delta: float  # m-normalized lower bound
    per_pattern: dict  # pattern -> raw Delta(x)
    perfect: bool


def split_random(dataset: Dataset, p: float, seed: int):
    """Assign each sample to train with probability p, independently.

    Returns (train dataset, test dataset, SplitTable); deterministic per seed.
    """
    if not 0 < p < 1:
        raise ValueError("split probability must be in (0, 1)")
    rng = np.random.default_rng(seed)
    in_train = rng.random(len(dataset.samples)) < p

    train = tuple(s for s, t in zip(dataset.samples, in_train) if t)
    test = tuple(s for s, t in zip(dataset.samples, in_train) if not t)

    entries: dict = {}
    for s, t in zip(dataset.samples, in_train):
        key = s.features
        pt, nt, pe, ne = entries.get(key, (0, 0, 0, 0))
        if t:
            pt, nt = (pt + 1, nt) if s.label > 0 else (pt, nt + 1)
        else:
            pe, ne = (pe + 1, ne) if s.label > 0 else (pe, ne + 1)
        entries[key] = (pt, nt, pe, ne)

    return (Dataset(schema=dataset.schema, samples=train),
            Dataset(schema=dataset.schema, samples=test),
            SplitTable(entries=entries, ratio=p))


def delta_lower_bound(split: SplitTable) -> DeltaReport:
    """Classifier-independent lower bound on train gap + test gap.

    Per pattern: 0 when the train and test sign tendencies agree
    (Q_train * Q_test >= 0), else min{|Q_train|, |Q_test|}.
    """
    per_pattern = {}
    for key, (pt, nt, pe, ne) in split.entries.items():
        q_train = pt - nt
        q_test = pe - ne
        if q_train * q_test >= 0:
            per_pattern[key] = 0
        else:
            per_pattern[key] = min(abs(q_train), abs(q_test))
    m = split.m
    raw = sum(per_pattern.values())
    delta = raw / m if m else 0.0
    return DeltaReport(delta=delta, per_pattern=per_pattern, perfect=raw == 0)


def delta_of_classifier(split: SplitTable, labeling: dict):
    """(train gap, test gap) of a concrete per-pattern +/-1 labeling.

    Both values are m-normalized; their sum is >= delta_lower_bound().delta
    for every labeling.
    """
    missing = [k for k in split.entries if k not in labeling]
    if missing:
        raise ValueError(f"labeling missing patterns {missing}")
    m = split.m
    delta_train = 0
    delta_test = 0
    for key, (pt, nt, pe, ne) in split.entries.items():
        f = labeling[key]
        if f not in (+1, -1):
            raise ValueError(f"labeling for {key!r} must be +1 or -1")
        if f > 0:
            delta_train += nt - min(pt, nt)
            delta_test += max(pe, ne) - pe
        else:
            delta_train += pt - min(pt, nt)
            delta_test += max(pe, ne) - ne
    return delta_train / m, delta_test / m


def _binom_pmf(n: int, p: float) -> np.ndarray:
    """pmf vector of Binomial(n, p) over 0..n."""
    if n < SMALL_COUNT:
        k = np.arange(n + 1)
        coeff = np.array([math.comb(n, int(i)) for i in k], dtype=float)
        return coeff * p ** k * (1 - p) ** (n - k)
    # log-gamma path, overflow-safe for large counts
    return stats.binom.pmf(np.arange(n + 1), n, p)


def _expected_extremum(pos: int, neg: int, p: float, which: str, rng) -> float:
    """E[min] or E[max] of (Binomial(pos, p), Binomial(neg, p)), independent."""
    fn = np.minimum if which == "min" else np.maximum
    if pos * neg <= EXACT_PRODUCT_LIMIT:
        pm_p = _binom_pmf(pos, p)
        pm_n = _binom_pmf(neg, p)
        i = np.arange(pos + 1)[:, None]
        j = np.arange(neg + 1)[None, :]
        return float(np.sum(np.outer(pm_p, pm_n) * fn(i, j)))
    draws_p = rng.binomial(pos, p, MC_TRIALS)
    draws_n = rng.binomial(neg, p, MC_TRIALS)
    return float(fn(draws_p, draws_n).mean())


def _check_ratio(p: float):
    if not 0 < p < 1:
        raise ValueError("division ratio must be in (0, 1)")


def expected_min_hinge(table: PatternTable, p: float, seed: int = 0) -> float:
    """Expected minimum train hinge loss under random division at ratio p.

    Normalized by m*p, the mean train size (the random denominator is
    approximated by its expectation).
    """
    _check_ratio(p)
    rng = np.random.default_rng(seed)
    pos, neg = table.counts()
    total = sum(_expected_extremum(int(P), int(N), p, "min", rng)
                for P, N in zip(pos, neg))
    return total / (table.m * p)


def expected_accuracy_upper(table: PatternTable, p: float, seed: int = 0) -> float:
    """Expected test accuracy ceiling under random division at ratio p."""
    _check_ratio(p)
    rng = np.random.default_rng(seed)
    pos, neg = table.counts()
    total = sum(_expected_extremum(int(P), int(N), 1 - p, "max", rng)
                for P, N in zip(pos, neg))
    return total / (table.m * (1 - p))


def expected_delta(table: PatternTable, p: float, seed: int = 0) -> float:
    """Expected joint-error bound under random division at ratio p.

    Per pattern: E[max test] + E[max train] - max{P, N}.  Symmetric in
    p <-> 1-p term by term.
    """
    _check_ratio(p)
    rng = np.random.default_rng(seed)
    pos, neg = table.counts()
    total = 0.0
    for P, N in zip(pos, neg):
        P, N = int(P), int(N)
        e_train = _expected_extremum(P, N, p, "max", rng)
        e_test = _expected_extremum(P, N, 1 - p, "max", rng)
        total += e_train + e_test - max(P, N)
    return total / table.m
