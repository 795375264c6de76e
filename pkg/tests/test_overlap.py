import numpy as np
import pytest
from scipy.spatial.distance import jensenshannon

from helpers import TOY, TOY_OVERLAP, random_two_class_table
from predbounds import (
    DistributionPair,
    PatternTable,
    ar_max_numeric,
    ar_min_heuristic,
    ar_upper_of_distributions,
    auc_roc_upper,
    envelope,
    overlap_index,
)
from predbounds.overlap import OptimizerConfig

FAST = OptimizerConfig(starts=6, max_iters=200, seed=0)


class TestOverlapIndex:
    def test_toy_value(self):
        assert overlap_index(TOY) == pytest.approx(TOY_OVERLAP, abs=1e-15)

    def test_matches_scipy_jensenshannon(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            table = random_two_class_table(rng)
            pair = DistributionPair.from_table(table)
            expected = 1 - jensenshannon(pair.p_hat, pair.n_hat, base=2) ** 2
            assert overlap_index(table) == pytest.approx(expected, abs=1e-9)

    def test_separated_classes(self):
        table = PatternTable.from_counts({("a",): (3, 0), ("b",): (0, 2)})
        assert overlap_index(table) == pytest.approx(0.0, abs=1e-15)

    def test_identical_distributions(self):
        table = PatternTable.from_counts({("a",): (2, 2), ("b",): (1, 1)})
        assert overlap_index(table) == pytest.approx(1.0, abs=1e-15)

    def test_range(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            value = overlap_index(random_two_class_table(rng))
            assert -1e-12 <= value <= 1 + 1e-12


class TestDistributionPair:
    def test_from_table_normalizes(self):
        pair = DistributionPair.from_table(TOY)
        assert pair.p_hat.sum() == pytest.approx(1.0)
        assert pair.n_hat.sum() == pytest.approx(1.0)

    def test_rejects_non_simplex(self):
        with pytest.raises(ValueError, match="simplex"):
            DistributionPair(p_hat=[0.5, 0.2], n_hat=[0.5, 0.5])
        with pytest.raises(ValueError, match="simplex"):
            DistributionPair(p_hat=[1.2, -0.2], n_hat=[0.5, 0.5])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError, match="common support"):
            DistributionPair(p_hat=[1.0], n_hat=[0.5, 0.5])

    def test_rejects_single_class(self):
        table = PatternTable.from_counts({("a",): (3, 0)})
        with pytest.raises(ValueError, match="single-class"):
            DistributionPair.from_table(table)


class TestArUpperOfDistributions:
    def test_agrees_with_integer_ceiling(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            table = random_two_class_table(rng)
            pair = DistributionPair.from_table(table)
            assert ar_upper_of_distributions(pair) == \
                pytest.approx(auc_roc_upper(table), abs=1e-12)

    def test_identical_pair_is_half(self):
        base = np.array([0.25, 0.25, 0.5])
        pair = DistributionPair(p_hat=base, n_hat=base)
        assert ar_upper_of_distributions(pair) == pytest.approx(0.5, abs=1e-15)

    def test_disjoint_pair_is_one(self):
        pair = DistributionPair(p_hat=[1.0, 0.0], n_hat=[0.0, 1.0])
        assert ar_upper_of_distributions(pair) == pytest.approx(1.0, abs=1e-15)


class TestArMinHeuristic:
    def test_endpoints_exact(self):
        assert ar_min_heuristic(0.0) == 1.0
        assert ar_min_heuristic(1.0) == 0.5

    def test_monotone_decreasing(self):
        grid = np.linspace(0.01, 0.99, 25)
        values = [ar_min_heuristic(v) for v in grid]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_inverts_boundary_family(self):
        # the (1-b, b) vs (0, 1) pair realizes exactly the curve's value
        for b in (0.2, 0.5, 0.8):
            pair = DistributionPair(p_hat=[1 - b, b], n_hat=[0.0, 1.0])
            d_s = overlap_index(pair)
            assert ar_min_heuristic(d_s) == pytest.approx(1 - b / 2, abs=1e-9)
            assert ar_upper_of_distributions(pair) == pytest.approx(1 - b / 2)

    def test_domain_validation(self):
        with pytest.raises(ValueError, match="overlap"):
            ar_min_heuristic(1.5)


class TestArMaxNumeric:
    def test_domain_validation(self):
        with pytest.raises(ValueError, match="target"):
            ar_max_numeric(0.0)
        with pytest.raises(ValueError, match="support"):
            ar_max_numeric(0.5, d=1)

    def test_dominates_min_curve(self):
        for d_s in (0.2, 0.5, 0.8):
            assert ar_max_numeric(d_s, d=6, config=FAST) >= \
                ar_min_heuristic(d_s) - 1e-6

    def test_dominates_concrete_pairs(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            p = rng.dirichlet(np.ones(6))
            n = rng.dirichlet(np.ones(6))
            pair = DistributionPair(p_hat=p, n_hat=n)
            d_s = overlap_index(pair)
            ceiling = ar_max_numeric(d_s, d=6, config=FAST)
            assert ar_upper_of_distributions(pair) <= ceiling + 1e-3

    def test_decreasing_in_overlap(self):
        low = ar_max_numeric(0.2, d=6, config=FAST)
        mid = ar_max_numeric(0.6, d=6, config=FAST)
        high = ar_max_numeric(0.98, d=6, config=FAST)
        assert low > mid > high > 0.5


class TestEnvelope:
    def test_grid_validation(self):
        with pytest.raises(ValueError, match="sorted"):
            envelope([0.5, 0.2])
        with pytest.raises(ValueError, match="inside"):
            envelope([0.0, 0.5])

    def test_samples_and_order(self):
        env = envelope([0.3, 0.6], d=5, config=FAST)
        assert env.d_used == 5
        assert len(env.samples) == 2
        for d_s, ar_min, ar_max in env.samples:
            assert 0.5 - 1e-9 <= ar_min <= 1.0
            assert ar_max >= ar_min - 1e-6
