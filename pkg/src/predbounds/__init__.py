"""Exact, classifier-independent predictability ceilings for binary data."""

from .bounds import (
    BoundsReport,
    CurvePoints,
    PatternScore,
    SingleClassError,
    accuracy_upper,
    auc_pr_upper,
    auc_roc_upper,
    bounds_report,
    min_loss,
    optimal_pr_curve,
    optimal_roc_curve,
    optimal_scores,
    ranking_auc,
)
from .dataset import (
    ColumnSchema,
    Dataset,
    DatasetError,
    PatternTable,
    Sample,
    build_pattern_table,
    discretize,
    generate_synthetic,
    load_csv,
)
from .estimators import CeilingFeatureSelector, PredictabilityBounds
from .overlap import (
    DistributionPair,
    OverlapEnvelope,
    ar_max_numeric,
    ar_min_heuristic,
    ar_upper_of_distributions,
    envelope,
    overlap_index,
)
from .splits import (
    DeltaReport,
    SplitTable,
    delta_lower_bound,
    delta_of_classifier,
    expected_accuracy_upper,
    expected_delta,
    expected_min_hinge,
    split_random,
)

__version__ = "0.1.0"
