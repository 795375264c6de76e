"""Bound-driven feature engineering.

Feature subsets are scored directly by the AUC ceiling and the overlap index
of the projected pattern table; no classifier is ever trained.  Adding a
column can only raise the ceiling and lower the overlap, so the per-size
best-subset curves are monotone and the minimal size whose best subset
already reaches the full overlap is well defined.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from itertools import combinations

from .bounds import auc_roc_upper
from .dataset import ColumnSchema, Dataset, DatasetError, Sample, build_pattern_table
from .overlap import overlap_index

__all__ = [
    "SubsetScore",
    "SelectionResult",
    "BudgetExceededError",
    "bounds_for_subset",
    "exhaustive_best_subset",
    "greedy_best_subset",
    "optimal_dimension_kstar",
    "augment_transform",
    "augment_neighborhood",
]

DEFAULT_BUDGET = 10**5
KSTAR_TOL = 1e-12


class BudgetExceededError(ValueError):
    """Subset enumeration too large; use greedy_best_subset instead."""


@dataclass(frozen=True)
class SubsetScore:
    subset: tuple[str, ...]
    ar_upper: float
    overlap: float
    d_patterns: int


@dataclass(frozen=True)
class SelectionResult:
    per_k: tuple  # best SubsetScore for k = 1..K
    k_star: int
    global_subset: SubsetScore
    full_overlap: float


def bounds_for_subset(dataset: Dataset, subset) -> SubsetScore:
    """Score one column subset by the AUC ceiling and overlap of its table."""
    names = tuple(subset)
    if not names:
        raise DatasetError("feature subset must be nonempty")
    table = build_pattern_table(dataset, names)
    if table.n_plus == 0 or table.n_minus == 0:
        raise DatasetError("dataset contains a single class")
    return SubsetScore(subset=names,
                       ar_upper=auc_roc_upper(table),
                       overlap=overlap_index(table),
                       d_patterns=table.d)


def _better(a: SubsetScore, b: SubsetScore) -> bool:
    # higher ceiling wins; ties broken by lower overlap, then lexicographic
    if a.ar_upper != b.ar_upper:
        return a.ar_upper > b.ar_upper
    if a.overlap != b.overlap:
        return a.overlap < b.overlap
    return a.subset < b.subset


def exhaustive_best_subset(dataset: Dataset, k0: int,
                           budget: int = DEFAULT_BUDGET) -> SubsetScore:
    """Best k0-subset over full enumeration, within the configured budget."""
    columns = dataset.column_names
    if not 1 <= k0 <= len(columns):
        raise DatasetError(f"subset size {k0} out of range 1..{len(columns)}")
    n_subsets = math.comb(len(columns), k0)
    if n_subsets > budget:
        raise BudgetExceededError(
            f"{n_subsets} subsets exceed budget {budget}; use greedy_best_subset")
    best = None
    for subset in combinations(columns, k0):
        score = bounds_for_subset(dataset, subset)
        if best is None or _better(score, best):
            best = score
    return best


def greedy_best_subset(dataset: Dataset, k0: int) -> SubsetScore:
    """Forward selection: add the column maximizing the ceiling each round."""
    columns = dataset.column_names
    if not 1 <= k0 <= len(columns):
        raise DatasetError(f"subset size {k0} out of range 1..{len(columns)}")
    chosen: list[str] = []
    score = None
    for _ in range(k0):
        best = None
        for c in columns:
            if c in chosen:
                continue
            cand = bounds_for_subset(dataset, chosen + [c])
            if best is None or _better(cand, best):
                best = cand
        chosen = list(best.subset)
        score = best
    return score


def optimal_dimension_kstar(dataset: Dataset, tolerance: float = KSTAR_TOL,
                            mode: str = "exhaustive",
                            budget: int = DEFAULT_BUDGET) -> SelectionResult:
    """Per-size best subsets and the minimal size reaching the full overlap.

    k* = min{k : best overlap at k <= overlap(full) + tolerance}; at k = K
    the best subset is the full column set, so k* always exists.
    """
    columns = dataset.column_names
    full = bounds_for_subset(dataset, columns)
    per_k = []
    for k in range(1, len(columns) + 1):
        if mode == "exhaustive":
            per_k.append(exhaustive_best_subset(dataset, k, budget=budget))
        elif mode == "greedy":
            per_k.append(greedy_best_subset(dataset, k))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    k_star = next(k for k, score in enumerate(per_k, start=1)
                  if score.overlap <= full.overlap + tolerance)
    return SelectionResult(per_k=tuple(per_k), k_star=k_star,
                           global_subset=per_k[k_star - 1],
                           full_overlap=full.overlap)


def augment_transform(dataset: Dataset, transform, name: str) -> Dataset:
    """Append a derived column computed from each sample's feature tuple.

    Because the new value is a function of the existing features, every bound
    and the overlap of the augmented dataset equal the originals exactly.
    """
    if name in dataset.column_names:
        raise DatasetError(f"column {name!r} already exists")
    schema = dataset.schema + (ColumnSchema(name=name),)
    samples = tuple(
        Sample(features=s.features + (transform(s.features),), label=s.label)
        for s in dataset.samples)
    return Dataset(schema=schema, samples=samples)


def _pattern_distance(a, b, metric: str, numeric_idx) -> float:
    if metric == "hamming":
        return sum(x != y for x, y in zip(a, b))
    if metric == "euclidean":
        try:
            return math.sqrt(sum((float(a[j]) - float(b[j])) ** 2 for j in numeric_idx))
        except (TypeError, ValueError):
            raise DatasetError("euclidean metric needs numeric columns") from None
    raise DatasetError(f"unknown metric {metric!r}")


def augment_neighborhood(dataset: Dataset, radius: float, aggregator: str = "count",
                         metric: str = "hamming", name: str = "neighborhood") -> Dataset:
    """Append a column aggregated over all samples within `radius`.

    Identical feature tuples get identical neighborhoods, hence identical new
    values, so the AUC ceiling of the result equals the original exactly.
    aggregator: "count" (neighbor samples), or "sum"/"mean" of the neighbors'
    numeric feature values.
    """
    if radius < 0:
        raise DatasetError("radius must be >= 0")
    if aggregator not in ("count", "sum", "mean"):
        raise DatasetError(f"unknown aggregator {aggregator!r}")
    if name in dataset.column_names:
        raise DatasetError(f"column {name!r} already exists")
    numeric_idx = [j for j, c in enumerate(dataset.schema) if c.kind == "numeric"]
    if metric == "euclidean" and not numeric_idx:
        raise DatasetError("euclidean metric needs numeric columns")

    # aggregate over distinct patterns, weighted by multiplicity
    weights: dict = {}
    for s in dataset.samples:
        weights[s.features] = weights.get(s.features, 0) + 1
    patterns = list(weights)

    def pattern_value(key) -> float:
        if math.isinf(radius):
            neighbors = patterns
        else:
            neighbors = [q for q in patterns
                         if _pattern_distance(key, q, metric, numeric_idx) <= radius]
        count = sum(weights[q] for q in neighbors)
        if aggregator == "count":
            return float(count)
        cols = numeric_idx or range(len(key))
        total = sum(weights[q] * sum(float(q[j]) for j in cols) for q in neighbors)
        return total / count if aggregator == "mean" else total

    values = {key: pattern_value(key) for key in patterns}
    schema = dataset.schema + (ColumnSchema(name=name),)
    samples = tuple(
        Sample(features=s.features + (values[s.features],), label=s.label)
        for s in dataset.samples)
    return Dataset(schema=schema, samples=samples)
