import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    TOY,
    TOY_AC,
    TOY_AP,
    TOY_AR,
    TOY_HINGE,
    TOY_SQUARE,
    random_two_class_table,
)
from predbounds import (
    PatternTable,
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
from predbounds.bounds import auc_roc_upper_pairwise

count_lists = st.lists(
    st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda t: sum(t) > 0),
    min_size=1, max_size=8)


def table_of(counts):
    return PatternTable.from_counts({(f"p{i}",): c for i, c in enumerate(counts)})


class TestToyValues:
    def test_auc_roc(self):
        assert auc_roc_upper(TOY) == TOY_AR

    def test_auc_pr(self):
        assert auc_pr_upper(TOY) == pytest.approx(TOY_AP, abs=1e-15)

    def test_accuracy(self):
        assert accuracy_upper(TOY) == TOY_AC

    def test_hinge(self):
        assert min_loss(TOY, "hinge") == TOY_HINGE

    def test_square(self):
        assert min_loss(TOY, "square") == pytest.approx(TOY_SQUARE, abs=1e-15)

    def test_softmax(self):
        # two symmetric (2, 1) patterns, natural log, divided by m = 6
        expected = -(2 * math.log(2 / 3) + math.log(1 / 3)) / 3
        assert min_loss(TOY, "softmax") == pytest.approx(expected, abs=1e-15)

    def test_roc_vertices(self):
        curve = optimal_roc_curve(TOY)
        assert curve.points == ((0.0, 0.0), (1 / 3, 2 / 3), (1.0, 1.0))
        assert curve.area == pytest.approx(TOY_AR, abs=1e-15)

    def test_pr_vertices(self):
        curve = optimal_pr_curve(TOY)
        assert curve.points == ((0.0, 2 / 3), (2 / 3, 2 / 3), (1.0, 0.5))
        # reported area is the exact sample-level value, not the polygon
        assert curve.area == pytest.approx(TOY_AP, abs=1e-15)


class TestPairwiseAgreement:
    def test_matches_prefix_sum_exactly(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            table = random_two_class_table(rng, max_d=8, max_count=9)
            assert auc_roc_upper(table) == auc_roc_upper_pairwise(table)

    def test_large_counts_stay_exact(self):
        table = table_of([(10**7, 1), (3, 10**7), (10**6, 10**6)])
        assert auc_roc_upper(table) == auc_roc_upper_pairwise(table)


class TestRankingAuc:
    def test_optimal_order_attains_ceiling(self):
        scores = optimal_scores(TOY)
        order = [s.pattern for s in scores]
        assert ranking_auc(TOY, order) == auc_roc_upper(TOY)

    def test_any_order_is_dominated(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            table = random_two_class_table(rng)
            keys = table.sorted_patterns()
            rng.shuffle(keys)
            assert ranking_auc(table, keys) <= auc_roc_upper(table) + 1e-15

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError, match="permutation"):
            ranking_auc(TOY, [("a",), ("a",)])


class TestOptimalScores:
    def test_f_star_values(self):
        scores = {s.pattern: s for s in optimal_scores(TOY)}
        assert scores[("a",)].f_star == pytest.approx(1 / 3)
        assert scores[("b",)].f_star == pytest.approx(-1 / 3)
        assert scores[("a",)].p_plus == pytest.approx(2 / 3)

    def test_descending_order(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            table = random_two_class_table(rng)
            p_plus = [s.p_plus for s in optimal_scores(table)]
            assert p_plus == sorted(p_plus, reverse=True)

    def test_tie_classifies_positive(self):
        table = table_of([(2, 2)])
        (score,) = optimal_scores(table)
        assert score.f_star == 0.0
        assert score.predicted_label == +1

    def test_sign_attains_accuracy_ceiling(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            table = random_two_class_table(rng)
            correct = sum(
                (p if s.predicted_label > 0 else n)
                for s, (p, n) in ((s, table.entries[s.pattern])
                                  for s in optimal_scores(table)))
            assert correct / table.m == accuracy_upper(table)


class TestCurves:
    def test_roc_is_concave(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            table = random_two_class_table(rng)
            pts = optimal_roc_curve(table).points
            slopes = [(y2 - y1) / (x2 - x1) if x2 > x1 else math.inf
                      for (x1, y1), (x2, y2) in zip(pts, pts[1:])]
            assert all(a >= b - 1e-12 for a, b in zip(slopes, slopes[1:]))

    def test_roc_area_equals_auc_ceiling(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            table = random_two_class_table(rng)
            assert optimal_roc_curve(table).area == \
                pytest.approx(auc_roc_upper(table), abs=1e-12)

    def test_roc_csv_header(self):
        text = optimal_roc_curve(TOY).to_csv()
        assert text.splitlines()[0] == "fpr,tpr"

    def test_pr_csv_round_trips(self):
        curve = optimal_pr_curve(TOY)
        rows = curve.to_csv().splitlines()
        assert rows[0] == "recall,precision"
        parsed = tuple(tuple(float(v) for v in row.split(",")) for row in rows[1:])
        assert parsed == curve.points

    def test_pr_endpoints(self):
        rng = np.random.default_rng(19)
        for _ in range(50):
            table = random_two_class_table(rng)
            pts = optimal_pr_curve(table).points
            assert pts[0][0] == 0.0
            assert pts[-1] == (1.0, table.n_plus / table.m)


class TestErrors:
    def test_single_class_raises(self):
        table = table_of([(3, 0), (1, 0)])
        for fn in (auc_roc_upper, auc_pr_upper, optimal_roc_curve,
                   optimal_pr_curve, bounds_report):
            with pytest.raises(SingleClassError):
                fn(table)

    def test_single_class_losses_still_defined(self):
        table = table_of([(3, 0), (1, 0)])
        assert accuracy_upper(table) == 1.0
        assert min_loss(table, "hinge") == 0.0

    def test_unknown_loss_kind(self):
        with pytest.raises(ValueError, match="unknown loss kind"):
            min_loss(TOY, "logistic")


class TestReport:
    def test_json_round_trips(self):
        report = bounds_report(TOY)
        payload = json.loads(report.to_json())
        assert payload["ar_upper"] == report.ar_upper
        assert payload["ap_upper"] == report.ap_upper
        assert payload["overlap"] == report.overlap
        assert payload["m"] == 6 and payload["d"] == 2

    def test_consistency(self):
        report = bounds_report(TOY)
        assert report.ac_upper + report.min_hinge == 1.0
        assert report.n_plus == 3 and report.n_minus == 3


@given(count_lists)
@settings(max_examples=200, deadline=None)
def test_property_prefix_sum_equals_pairwise(counts):
    table = table_of(counts)
    if table.n_plus == 0 or table.n_minus == 0:
        return
    assert auc_roc_upper(table) == auc_roc_upper_pairwise(table)


@given(count_lists)
@settings(max_examples=200, deadline=None)
def test_property_bound_ranges(counts):
    table = table_of(counts)
    if table.n_plus == 0 or table.n_minus == 0:
        return
    ar = auc_roc_upper(table)
    ap = auc_pr_upper(table)
    ac = accuracy_upper(table)
    assert 0.5 <= ar <= 1.0
    assert table.n_plus / table.m - 1e-12 <= ap <= 1.0 + 1e-12
    assert max(table.n_plus, table.n_minus) / table.m <= ac <= 1.0
    assert 0.0 <= min_loss(table, "square") <= 1.0
    assert ac + min_loss(table, "hinge") == 1.0


@given(count_lists)
@settings(max_examples=100, deadline=None)
def test_property_duplicating_counts_is_invariant(counts):
    # scaling every pattern's counts by the same factor changes nothing
    table = table_of(counts)
    doubled = table_of([(2 * p, 2 * n) for p, n in counts])
    if table.n_plus == 0 or table.n_minus == 0:
        return
    assert auc_roc_upper(table) == pytest.approx(auc_roc_upper(doubled), abs=1e-12)
    assert accuracy_upper(table) == pytest.approx(accuracy_upper(doubled), abs=1e-12)
