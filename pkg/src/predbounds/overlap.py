"""Jensen-Shannon class overlap and the feasible (overlap, AUC-ceiling) region.

The overlap index is one minus the Jensen-Shannon divergence (base-2) between
the normalized positive and negative pattern distributions: 0 means the
classes are fully separated, 1 means identical.  The envelope traces, for
each overlap level, the smallest and largest AUC ceiling any distribution
pair can realize: a closed-form boundary curve for the minimum and a
constrained numerical optimization for the maximum.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .dataset import PatternTable

__all__ = [
    "DistributionPair",
    "OverlapEnvelope",
    "OptimizerConfig",
    "overlap_index",
    "ar_upper_of_distributions",
    "ar_min_heuristic",
    "ar_max_numeric",
    "envelope",
]

SIMPLEX_TOL = 1e-12
FEASIBILITY_TOL = 1e-6


@dataclass(frozen=True)
class DistributionPair:
    """Normalized positive/negative pattern distributions on a shared support."""

    p_hat: np.ndarray
    n_hat: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p_hat, dtype=float)
        n = np.asarray(self.n_hat, dtype=float)
        object.__setattr__(self, "p_hat", p)
        object.__setattr__(self, "n_hat", n)
        if p.shape != n.shape or p.ndim != 1:
            raise ValueError("distributions must be 1-D with common support")
        for v in (p, n):
            if np.any(v < -SIMPLEX_TOL) or abs(v.sum() - 1.0) > 1e-9:
                raise ValueError("distribution is not simplex-valued")

    @classmethod
    def from_table(cls, table: PatternTable) -> "DistributionPair":
        if table.n_plus == 0 or table.n_minus == 0:
            raise ValueError("single-class table has no distribution pair")
        pos, neg = table.counts()
        return cls(p_hat=pos / table.n_plus, n_hat=neg / table.n_minus)


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 16
    max_iters: int = 300
    tolerance: float = 1e-9
    seed: int = 0


@dataclass(frozen=True)
class OverlapEnvelope:
    samples: tuple  # ordered (overlap, ar_min, ar_max)
    d_used: int
    flags: tuple = ()  # non-monotonic optimizer artifacts, if any


def _js_overlap(p: np.ndarray, n: np.ndarray) -> float:
    s = p + n
    with np.errstate(divide="ignore", invalid="ignore"):
        term_p = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1) / np.where(s > 0, s, 1)), 0.0)
        term_n = np.where(n > 0, n * np.log2(np.where(n > 0, n, 1) / np.where(s > 0, s, 1)), 0.0)
    return float(-(term_p.sum() + term_n.sum()) / 2)


def overlap_index(source) -> float:
    """Overlap D in [0, 1] between the class-conditional pattern distributions.

    Accepts a PatternTable or a DistributionPair.  Uses base-2 logs with
    0 * log 0 := 0.
    """
    if isinstance(source, PatternTable):
        source = DistributionPair.from_table(source)
    return _js_overlap(source.p_hat, source.n_hat)


def ar_upper_of_distributions(pair: DistributionPair) -> float:
    """AUC ceiling of a real-weighted distribution pair.

    (1/2) sum over all (i, j) of max{p_i n_j, p_j n_i}; on integer-count
    tables this equals the integer AUC ceiling after normalization.
    """
    p, n = pair.p_hat, pair.n_hat
    outer = np.outer(p, n)
    return float(np.maximum(outer, outer.T).sum() / 2)


def _overlap_of_support_pair(b: float) -> float:
    # heuristic boundary family: p = (1-b, b), n = (0, 1)
    if b <= 0:
        return 0.0
    return -(b * np.log2(b) - (b + 1) * np.log2(b + 1)) / 2


def ar_min_heuristic(d_target: float) -> float:
    """Closed-form minimum AUC ceiling at a given overlap level.

    Inverts the strictly increasing map b -> overlap of the two-point
    boundary family by bisection, then returns 1 - b/2.  Endpoints are
    exact: overlap 0 -> 1, overlap 1 -> 0.5.
    """
    if not 0 <= d_target <= 1:
        raise ValueError("overlap must be in [0, 1]")
    if d_target == 0:
        return 1.0
    if d_target == 1:
        return 0.5
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-10:
        mid = (lo + hi) / 2
        if _overlap_of_support_pair(mid) < d_target:
            lo = mid
        else:
            hi = mid
    b = (lo + hi) / 2
    return 1 - b / 2


def _ordered_objective(x: np.ndarray, d: int) -> float:
    # smooth surrogate of the AUC ceiling: lower-triangle bilinear form plus
    # half the diagonal; its max over simplex pairs equals the max of the
    # true (permutation-invariant) ceiling
    p = x[:d]
    n = x[d:]
    cum_n = np.concatenate(([0.0], np.cumsum(n)[:-1]))
    return float(np.dot(p, cum_n) + 0.5 * np.dot(p, n))


def ar_max_numeric(d_target: float, d: int = 10,
                   config: OptimizerConfig | None = None) -> float:
    """Maximum AUC ceiling at a given overlap level, by constrained SQP.

    Multi-start SLSQP over simplex pairs with the overlap held at d_target;
    returns the best feasible value (constraint violation <= 1e-6).
    """
    if not 0 < d_target < 1:
        raise ValueError("overlap target must be in (0, 1)")
    if d < 2:
        raise ValueError("need at least 2 support points")
    config = config or OptimizerConfig()
    rng = np.random.default_rng(config.seed)

    def split(x):
        return np.clip(x[:d], 0, None), np.clip(x[d:], 0, None)

    constraints = [
        {"type": "eq", "fun": lambda x: _js_overlap(*split(x)) - d_target},
        {"type": "eq", "fun": lambda x: x[:d].sum() - 1.0},
        {"type": "eq", "fun": lambda x: x[d:].sum() - 1.0},
    ]
    bounds = [(0.0, 1.0)] * (2 * d)

    def neg_objective(x):
        return -_ordered_objective(x, d)

    starts = []
    # structured start: two-point boundary family at the matching overlap
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-10:
        mid = (lo + hi) / 2
        if _overlap_of_support_pair(mid) < d_target:
            lo = mid
        else:
            hi = mid
    b = (lo + hi) / 2
    x0 = np.full(2 * d, 1e-9)
    x0[0], x0[1] = 1 - b, b
    x0[2 * d - 1] = 1.0
    x0[:d] /= x0[:d].sum()
    x0[d:] /= x0[d:].sum()
    starts.append(x0)
    # blended start toward the identical-distribution corner
    base = np.full(d, 1.0 / d)
    x1 = np.concatenate([base, base]) + rng.normal(0, 0.01, 2 * d)
    starts.append(np.clip(x1, 1e-9, None))
    while len(starts) < config.starts:
        x = np.concatenate([rng.dirichlet(np.ones(d) * 0.5),
                            rng.dirichlet(np.ones(d) * 0.5)])
        starts.append(np.clip(x, 1e-12, None))

    best_value = None
    best_violation = np.inf
    for x0 in starts:
        x0 = x0.copy()
        x0[:d] /= x0[:d].sum()
        x0[d:] /= x0[d:].sum()
        try:
            res = minimize(neg_objective, x0, method="SLSQP",
                           bounds=bounds, constraints=constraints,
                           options={"maxiter": config.max_iters,
                                    "ftol": config.tolerance})
        except (ValueError, FloatingPointError):
            continue
        p, n = split(res.x)
        if p.sum() <= 0 or n.sum() <= 0:
            continue
        p = p / p.sum()
        n = n / n.sum()
        violation = abs(_js_overlap(p, n) - d_target)
        best_violation = min(best_violation, violation)
        if violation > FEASIBILITY_TOL:
            continue
        value = ar_upper_of_distributions(DistributionPair(p_hat=p, n_hat=n))
        if best_value is None or value > best_value:
            best_value = value
    if best_value is None:
        raise RuntimeError(
            f"no feasible optimum found (best constraint violation {best_violation:.2e})")
    return best_value


def envelope(d_grid, d: int = 10,
             config: OptimizerConfig | None = None) -> OverlapEnvelope:
    """Sampled (overlap, ar_min, ar_max) triples over a sorted overlap grid.

    Non-monotonic artifacts of the numerical maximum are flagged, not fixed.
    """
    grid = [float(v) for v in d_grid]
    if any(not 0 < v < 1 for v in grid) or grid != sorted(grid):
        raise ValueError("grid values must be sorted and inside (0, 1)")
    samples = []
    flags = []
    prev_max = None
    for d_s in grid:
        ar_min = ar_min_heuristic(d_s)
        ar_max = ar_max_numeric(d_s, d=d, config=config)
        if prev_max is not None and ar_max > prev_max + 1e-9:
            flags.append(f"ar_max not non-increasing at overlap={d_s:g}")
        prev_max = ar_max
        samples.append((d_s, ar_min, ar_max))
    for flag in flags:
        warnings.warn(flag)
    return OverlapEnvelope(samples=tuple(samples), d_used=d, flags=tuple(flags))
