"""Scikit-learn style wrappers around the bound computations.

PredictabilityBounds is a fit/predict estimator: fitting aggregates the
training rows into a pattern table and exposes the dataset's performance
ceilings as attributes; predicting applies the per-pattern optimal classifier
(majority class for unseen patterns).  CeilingFeatureSelector is a
fit/transform column selector driven by the AUC ceiling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array

from .bounds import bounds_report, optimal_scores
from .dataset import ColumnSchema, Dataset, PatternTable, Sample
from .features import greedy_best_subset

__all__ = ["PredictabilityBounds", "CeilingFeatureSelector", "dataset_from_arrays"]


def dataset_from_arrays(X, y) -> Dataset:
    """Build a Dataset from array-likes; y entries are mapped to +/-1."""
    X = check_array(X, dtype=None, ensure_2d=True)
    y = np.asarray(y)
    if len(y) != len(X):
        raise ValueError("X and y length mismatch")
    classes = np.unique(y)
    if len(classes) > 2:
        raise ValueError(f"y must be binary, got {len(classes)} classes")
    positive = classes[-1]
    schema = tuple(ColumnSchema(name=f"x{j}") for j in range(X.shape[1]))
    samples = tuple(
        Sample(features=tuple(row), label=+1 if label == positive else -1)
        for row, label in zip(X, y))
    return Dataset(schema=schema, samples=samples)


class PredictabilityBounds(BaseEstimator, ClassifierMixin):
    """Exact performance ceilings of the training data, plus the optimal
    pattern classifier they are attained by.

    After fit: ar_upper_, ap_upper_, ac_upper_, overlap_, min_square_,
    min_hinge_, min_softmax_, report_.
    """

    def fit(self, X, y):
        dataset = dataset_from_arrays(X, y)
        entries: dict = {}
        for s in dataset.samples:
            pos, neg = entries.get(s.features, (0, 0))
            entries[s.features] = (pos + 1, neg) if s.label > 0 else (pos, neg + 1)
        self.table_ = PatternTable.from_counts(entries)
        report = bounds_report(self.table_)
        self.report_ = report
        self.ar_upper_ = report.ar_upper
        self.ap_upper_ = report.ap_upper
        self.ac_upper_ = report.ac_upper
        self.overlap_ = report.overlap
        self.min_square_ = report.min_square
        self.min_hinge_ = report.min_hinge
        self.min_softmax_ = report.min_softmax
        self.scores_ = {s.pattern: s for s in optimal_scores(self.table_)}
        self.classes_ = np.array([-1, 1])
        classes = np.unique(y)
        self._positive = classes[-1]
        self._negative = classes[0] if len(classes) > 1 else classes[-1]
        self._majority = +1 if self.table_.n_plus >= self.table_.n_minus else -1
        return self

    def _check_fitted(self):
        if not hasattr(self, "table_"):
            raise NotFittedError("fit must be called first")

    def decision_function(self, X):
        """Per-row optimal score f* in [-1, 1]; majority f* for unseen rows."""
        self._check_fitted()
        X = check_array(X, dtype=None, ensure_2d=True)
        fallback = float(self._majority)
        return np.array([
            self.scores_[key].f_star if (key := tuple(row)) in self.scores_
            else fallback
            for row in X])

    def predict(self, X):
        scores = self.decision_function(X)
        return np.where(scores >= 0, self._positive, self._negative)

    def predict_proba(self, X):
        p_plus = (self.decision_function(X) + 1) / 2
        return np.column_stack([1 - p_plus, p_plus])


class CeilingFeatureSelector(BaseEstimator, TransformerMixin):
    """Select k columns by forward greedy maximization of the AUC ceiling."""

    def __init__(self, k: int = 1):
        self.k = k

    def fit(self, X, y):
        dataset = dataset_from_arrays(X, y)
        if not 1 <= self.k <= len(dataset.schema):
            raise ValueError(f"k={self.k} out of range 1..{len(dataset.schema)}")
        score = greedy_best_subset(dataset, self.k)
        names = dataset.column_names
        self.support_ = np.array([name in score.subset for name in names])
        self.selected_indices_ = np.array(
            [names.index(name) for name in score.subset])
        self.score_ = score
        return self

    def transform(self, X):
        if not hasattr(self, "support_"):
            raise NotFittedError("fit must be called first")
        X = check_array(X, dtype=None, ensure_2d=True)
        return X[:, self.selected_indices_]

    def get_support(self):
        if not hasattr(self, "support_"):
            raise NotFittedError("fit must be called first")
        return self.support_
