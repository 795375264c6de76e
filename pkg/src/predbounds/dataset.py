"""Tabular ingestion, discretization, and pattern-level counting.

A *pattern* is a distinct feature tuple; every bound in this package is a
function of the per-pattern positive/negative counts only, so the pattern
table is the single handoff point between raw data and the math.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ColumnSchema",
    "Sample",
    "Dataset",
    "PatternTable",
    "DatasetError",
    "load_csv",
    "discretize",
    "build_pattern_table",
    "generate_synthetic",
]


class DatasetError(ValueError):
    """Raised for malformed input data (bad CSV, non-binary labels, ...)."""


@dataclass(frozen=True)
class ColumnSchema:
    """Schema for one feature column.

    kind is "categorical" or "numeric".  binning applies to numeric columns
    only: "none", "equal-width", or "quantile", with ``bins`` giving the
    bin count B >= 1.
    """

    name: str
    kind: str = "categorical"
    binning: str = "none"
    bins: int = 0

    def __post_init__(self):
        if self.kind not in ("categorical", "numeric"):
            raise DatasetError(f"unknown column kind {self.kind!r}")
        if self.binning not in ("none", "equal-width", "quantile"):
            raise DatasetError(f"unknown binning {self.binning!r}")
        if self.kind == "categorical" and self.binning != "none":
            raise DatasetError(f"categorical column {self.name!r} cannot be binned")
        if self.binning != "none" and self.bins < 1:
            raise DatasetError(f"column {self.name!r}: bin count must be >= 1")


@dataclass(frozen=True)
class Sample:
    features: tuple
    label: int  # +1 or -1

    def __post_init__(self):
        if self.label not in (+1, -1):
            raise DatasetError(f"label must be +1 or -1, got {self.label!r}")


@dataclass(frozen=True)
class Dataset:
    schema: tuple[ColumnSchema, ...]
    samples: tuple[Sample, ...]

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.schema)

    def column_index(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise DatasetError(f"unknown column {name!r}") from None

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class PatternTable:
    """Distinct feature tuples with aggregate positive/negative counts."""

    entries: dict  # pattern tuple -> (pos, neg)
    n_plus: int
    n_minus: int

    @property
    def m(self) -> int:
        return self.n_plus + self.n_minus

    @property
    def d(self) -> int:
        return len(self.entries)

    def counts(self):
        """Counts as integer arrays (pos, neg) in canonical pattern order."""
        keys = self.sorted_patterns()
        pos = np.array([self.entries[k][0] for k in keys], dtype=np.int64)
        neg = np.array([self.entries[k][1] for k in keys], dtype=np.int64)
        return pos, neg

    def sorted_patterns(self) -> list:
        # canonical order: lexicographic on stringified tokens, reproducible
        # across runs regardless of insertion order
        return sorted(self.entries, key=lambda k: tuple(str(t) for t in k))

    def to_json(self) -> str:
        keys = self.sorted_patterns()
        payload = {
            "entries": [
                {"pattern": ["%s" % t for t in k],
                 "pos": self.entries[k][0],
                 "neg": self.entries[k][1]}
                for k in keys
            ],
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "m": self.m,
        }
        return json.dumps(payload, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["pattern", "pos", "neg"])
        for k in self.sorted_patterns():
            pos, neg = self.entries[k]
            writer.writerow(["|".join(str(t) for t in k), pos, neg])
        return buf.getvalue()

    @classmethod
    def from_counts(cls, entries: dict) -> "PatternTable":
        n_plus = sum(p for p, _ in entries.values())
        n_minus = sum(n for _, n in entries.values())
        for k, (p, n) in entries.items():
            if p < 0 or n < 0 or p + n < 1:
                raise DatasetError(f"pattern {k!r} has invalid counts ({p}, {n})")
        return cls(entries=dict(entries), n_plus=n_plus, n_minus=n_minus)

    @classmethod
    def from_csv(cls, text: str) -> "PatternTable":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != ["pattern", "pos", "neg"]:
            raise DatasetError("pattern table CSV must have header pattern,pos,neg")
        entries = {}
        for row in reader:
            if not row:
                continue
            key = tuple(row[0].split("|"))
            if key in entries:
                raise DatasetError(f"duplicate pattern {row[0]!r}")
            entries[key] = (int(row[1]), int(row[2]))
        if not entries:
            raise DatasetError("no rows")
        return cls.from_counts(entries)


def load_csv(path, label_column: str, positive_token: str,
             schema: Sequence[ColumnSchema] | None = None,
             require_positive: bool = True) -> Dataset:
    """Read an RFC-4180 style CSV into a Dataset.

    The label column must contain exactly the positive token plus at most one
    other token.  Rows with missing values in used columns are rejected with
    their row numbers reported.  ``require_positive=False`` allows a file with
    no positive rows, for callers that validate across several files (one half
    of an explicit train/test split may be single-class).
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError("no rows") from None
        rows = list(reader)
    if not rows:
        raise DatasetError("no rows")
    if label_column not in header:
        raise DatasetError(f"missing column {label_column!r}")
    label_idx = header.index(label_column)

    if schema is None:
        schema = [ColumnSchema(name=c) for c in header if c != label_column]
    for col in schema:
        if col.name not in header:
            raise DatasetError(f"missing column {col.name!r}")
    feature_idx = [header.index(c.name) for c in schema]

    bad_rows = [i + 2 for i, row in enumerate(rows)
                if len(row) <= max(feature_idx + [label_idx])
                or any(row[j] == "" for j in feature_idx + [label_idx])]
    if bad_rows:
        raise DatasetError(f"missing values in rows {bad_rows}")

    tokens = {row[label_idx] for row in rows}
    if require_positive and positive_token not in tokens:
        raise DatasetError(
            f"label not binary: positive token {positive_token!r} absent "
            f"(found {sorted(tokens)})")
    if len(tokens) > 2:
        raise DatasetError(f"label not binary: {len(tokens)} distinct tokens {sorted(tokens)}")

    samples = tuple(
        Sample(features=tuple(row[j] for j in feature_idx),
               label=+1 if row[label_idx] == positive_token else -1)
        for row in rows)
    return Dataset(schema=tuple(schema), samples=samples)


def _equal_width_bins(values: np.ndarray, bins: int) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.zeros(len(values), dtype=np.int64)
    idx = np.floor((values - lo) / (hi - lo) * bins).astype(np.int64)
    return np.minimum(idx, bins - 1)


def _quantile_bins(values: np.ndarray, bins: int) -> np.ndarray:
    # empirical quantile edges; ties at an edge go to the lower bin
    edges = np.quantile(values, np.linspace(0, 1, bins + 1)[1:-1])
    idx = np.searchsorted(edges, values, side="left")
    if len(np.unique(values)) == 1 and bins > 1:
        warnings.warn("constant column under quantile binning: all rows map to bin 0")
    return idx.astype(np.int64)


def discretize(dataset: Dataset, schema: Sequence[ColumnSchema] | None = None) -> Dataset:
    """Replace numeric columns by bin indices per their binning rule.

    Bin edges are computed on the full dataset, so any later train/test split
    shares a single discretized feature domain.
    """
    if schema is None:
        schema = dataset.schema
    if tuple(c.name for c in schema) != dataset.column_names:
        raise DatasetError("schema columns must match dataset columns")

    columns = list(zip(*(s.features for s in dataset.samples)))
    new_columns = []
    for col, raw in zip(schema, columns):
        if col.kind != "numeric" or col.binning == "none":
            new_columns.append(raw)
            continue
        values = np.array([float(v) for v in raw])
        if not np.all(np.isfinite(values)):
            raise DatasetError(f"column {col.name!r} has non-finite values")
        if col.binning == "equal-width":
            idx = _equal_width_bins(values, col.bins)
        else:
            idx = _quantile_bins(values, col.bins)
        new_columns.append(tuple(int(i) for i in idx))

    out_schema = tuple(
        ColumnSchema(name=c.name, kind="categorical", binning="none") for c in schema)
    samples = tuple(
        Sample(features=tuple(col[i] for col in new_columns), label=s.label)
        for i, s in enumerate(dataset.samples))
    return Dataset(schema=out_schema, samples=samples)


def build_pattern_table(dataset: Dataset,
                        feature_subset: Iterable[str] | None = None) -> PatternTable:
    """Project samples onto a column subset and aggregate counts per pattern."""
    if feature_subset is None:
        idx = list(range(len(dataset.schema)))
    else:
        names = list(feature_subset)
        if not names:
            raise DatasetError("feature subset must be nonempty")
        idx = [dataset.column_index(n) for n in names]

    entries: dict = {}
    for s in dataset.samples:
        key = tuple(s.features[j] for j in idx)
        pos, neg = entries.get(key, (0, 0))
        if s.label > 0:
            entries[key] = (pos + 1, neg)
        else:
            entries[key] = (pos, neg + 1)
    return PatternTable.from_counts(entries)


def generate_synthetic(feature_law, label_prob: float, size: int, seed: int,
                       n_features: int = 1) -> Dataset:
    """Draw i.i.d. features from a named law and Bernoulli labels.

    feature_law is one of:
      ("poisson", lam)
      ("gaussian", mu, sigma, bins)   -- values binned into `bins` integer bins
      ("powerlaw", alpha, support)    -- Zipf-like over {1..support}
    """
    if not 0 <= label_prob <= 1:
        raise DatasetError("label probability must be in [0, 1]")
    if size < 1:
        raise DatasetError("size must be >= 1")
    rng = np.random.default_rng(seed)

    kind = feature_law[0]
    if kind == "poisson":
        lam = feature_law[1]
        if lam <= 0:
            raise DatasetError("poisson rate must be positive")
        feats = rng.poisson(lam, size=(size, n_features))
    elif kind == "gaussian":
        _, mu, sigma, bins = feature_law
        if sigma <= 0 or bins < 1:
            raise DatasetError("gaussian law needs sigma > 0 and bins >= 1")
        raw = rng.normal(mu, sigma, size=(size, n_features))
        feats = np.empty_like(raw, dtype=np.int64)
        for j in range(n_features):
            feats[:, j] = _equal_width_bins(raw[:, j], bins)
    elif kind == "powerlaw":
        _, alpha, support = feature_law
        if alpha <= 0 or support < 1:
            raise DatasetError("powerlaw law needs alpha > 0 and support >= 1")
        weights = np.arange(1, support + 1, dtype=float) ** (-alpha)
        weights /= weights.sum()
        feats = rng.choice(np.arange(1, support + 1), size=(size, n_features), p=weights)
    else:
        raise DatasetError(f"unknown feature law {kind!r}")

    labels = np.where(rng.random(size) < label_prob, 1, -1)
    schema = tuple(ColumnSchema(name=f"f{j}") for j in range(n_features))
    samples = tuple(
        Sample(features=tuple(int(v) for v in feats[i]), label=int(labels[i]))
        for i in range(size))
    return Dataset(schema=schema, samples=samples)
