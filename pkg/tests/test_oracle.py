import numpy as np
import pytest

from helpers import TOY, TOY_AC, TOY_AP, TOY_AR, TOY_HINGE, random_two_class_table
from predbounds import PatternTable, ranking_auc
from predbounds.oracle import (
    BudgetError,
    OracleBudget,
    brute_best_accuracy,
    brute_best_auc,
    brute_best_pr_area,
    brute_min_delta,
    brute_min_hinge,
    mc_expected,
)
from predbounds.splits import SplitTable


class TestBruteValues:
    def test_toy(self):
        value, order = brute_best_auc(TOY)
        assert value == pytest.approx(TOY_AR, abs=1e-12)
        assert order == ((("a",), ("b",)))
        assert brute_best_pr_area(TOY) == pytest.approx(TOY_AP, abs=1e-12)
        assert brute_best_accuracy(TOY) == pytest.approx(TOY_AC, abs=1e-12)
        assert brute_min_hinge(TOY) == pytest.approx(TOY_HINGE, abs=1e-12)

    def test_argmax_order_is_consistent(self):
        rng = np.random.default_rng(61)
        for _ in range(20):
            table = random_two_class_table(rng, max_d=5)
            value, order = brute_best_auc(table)
            assert ranking_auc(table, order) == pytest.approx(value, abs=1e-12)

    def test_min_delta_example(self):
        split = SplitTable(entries={("x",): (2, 0, 0, 1)})
        assert brute_min_delta(split) == pytest.approx(1 / 3, abs=1e-12)


class TestBudgets:
    def test_ordering_budget(self):
        table = PatternTable.from_counts(
            {(f"p{i}",): (1, 1) for i in range(9)})
        with pytest.raises(BudgetError, match="ordering budget"):
            brute_best_auc(table)
        with pytest.raises(BudgetError, match="ordering budget"):
            brute_best_pr_area(table)

    def test_labeling_budget(self):
        table = PatternTable.from_counts(
            {(f"p{i}",): (1, 1) for i in range(13)})
        with pytest.raises(BudgetError, match="labeling budget"):
            brute_best_accuracy(table)
        with pytest.raises(BudgetError, match="labeling budget"):
            brute_min_hinge(table)

    def test_budget_is_configurable(self):
        table = PatternTable.from_counts(
            {(f"p{i}",): (1, 1) for i in range(4)})
        with pytest.raises(BudgetError):
            brute_best_auc(table, budget=OracleBudget(max_patterns=3))

    def test_single_class_rejected(self):
        table = PatternTable.from_counts({("a",): (2, 0)})
        with pytest.raises(ValueError, match="single-class"):
            brute_best_auc(table)


class TestMonteCarlo:
    def test_validation(self):
        with pytest.raises(ValueError, match="trials"):
            mc_expected(TOY, 0.5, trials=10, seed=0)
        with pytest.raises(ValueError, match="ratio"):
            mc_expected(TOY, 1.0, trials=2000, seed=0)

    def test_deterministic_per_seed(self):
        a = mc_expected(TOY, 0.5, trials=2000, seed=1)
        b = mc_expected(TOY, 0.5, trials=2000, seed=1)
        assert a == b

    def test_shape_and_stderr(self):
        result = mc_expected(TOY, 0.4, trials=5000, seed=2)
        assert set(result) == {"min_hinge", "ac_upper", "delta"}
        for estimate, stderr in result.values():
            assert stderr >= 0.0
            assert 0.0 <= estimate <= 1.0
