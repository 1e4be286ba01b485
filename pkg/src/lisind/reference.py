"""Classical association tests used as power-comparison baselines.

Pearson's product-moment correlation (t-distributed under normality),
Spearman's rank correlation and Kendall's tau (both distribution-free), and
a Hoeffding-type rank statistic measuring the distance between the joint
empirical distribution and the product of its marginals.  P-value
conventions: Pearson and Spearman use the exact t transform with n - 2
degrees of freedom; Kendall uses the standard normal approximation with
variance 2(2n+5)/(9n(n-1)); the Hoeffding statistic uses a seeded Monte
Carlo permutation null, since its closed-form null distribution is
impractical.  All tests reject at p <= alpha for consistency with the exact
LIS test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import betainc as _betainc

from . import _kernels
from .permutation import PairedSample, TiesPresentError, _ranks

__all__ = [
    "AssociationStatistic",
    "pearson_test",
    "spearman_test",
    "kendall_test",
    "hoeffding_test",
    "student_t_cdf",
    "normal_cdf",
    "regularized_incomplete_beta",
]


@dataclass(frozen=True)
class AssociationStatistic:
    """A named association statistic with its two-sided p-value."""

    name: str
    value: float
    p_value: float
    n: int


def normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-float(z) / math.sqrt(2.0))


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1], absolute error <= 1e-10."""
    if a <= 0 or b <= 0:
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return float(_betainc(a, b, x))


def student_t_cdf(t: float, df: int) -> float:
    """Student-t CDF with integer df >= 1, through the incomplete beta function."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    t = float(t)
    if t == 0.0:
        return 0.5
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    x = df / (df + t * t)
    tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x)
    return tail if t < 0 else 1.0 - tail


def _t_transform_p(r: float, n: int) -> tuple[float, float]:
    """(t statistic, two-sided p) for a correlation via t = r sqrt((n-2)/(1-r^2))."""
    if r >= 1.0:
        return math.inf, 0.0
    if r <= -1.0:
        return -math.inf, 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return t, 2.0 * student_t_cdf(-abs(t), n - 2)


def pearson_test(sample: PairedSample) -> AssociationStatistic:
    """Product-moment correlation with exact-t two-sided p-value.

    Requires n >= 3 and nonzero variance in each coordinate; |r| = 1 yields
    t = +/-inf and p = 0 explicitly.
    """
    x, y = sample.xs, sample.ys
    n = sample.n
    if n < 3:
        raise ValueError(f"need at least 3 pairs, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise ValueError("degenerate variance: a coordinate is constant")
    r = float(dx @ dy) / math.sqrt(sx * sy)
    r = max(-1.0, min(1.0, r))
    _, p = _t_transform_p(r, n)
    return AssociationStatistic(name="Pearson", value=r, p_value=p, n=n)


def _rank_correlation(x_ranks: np.ndarray, y_ranks: np.ndarray) -> float:
    """r_s = 12/(n(n^2-1)) sum (rx - (n+1)/2)(ry - (n+1)/2) for tie-free ranks."""
    n = x_ranks.size
    center = 0.5 * (n + 1)
    total = float((x_ranks - center) @ (y_ranks - center))
    return 12.0 * total / (n * (n * n - 1.0))


def spearman_test(sample: PairedSample) -> AssociationStatistic:
    """Rank correlation with exact-t two-sided p-value (tie-free samples)."""
    n = sample.n
    if n < 3:
        raise ValueError(f"need at least 3 pairs, got {n}")
    if sample.has_tied_x() or sample.has_tied_y():
        raise TiesPresentError("rank correlation requires tie-free coordinates")
    r_s = _rank_correlation(_ranks(sample.xs), _ranks(sample.ys))
    r_s = max(-1.0, min(1.0, r_s))
    _, p = _t_transform_p(r_s, n)
    return AssociationStatistic(name="Spearman", value=r_s, p_value=p, n=n)


def _kendall_tau_ties(x: np.ndarray, y: np.ndarray) -> float:
    """tau as the mean over ordered pairs of s(dx) s(dy), where s(0) = 1/2.

    Chunked O(n^2) evaluation; only used when ties are present.
    """
    n = x.size
    total = 0.0
    chunk = 256
    for start in range(0, n, chunk):
        dx = x[start : start + chunk, None] - x[None, :]
        dy = y[start : start + chunk, None] - y[None, :]
        sx = np.where(dx > 0, 1.0, np.where(dx < 0, -1.0, 0.5))
        sy = np.where(dy > 0, 1.0, np.where(dy < 0, -1.0, 0.5))
        total += float((sx * sy).sum())
    total -= 0.25 * n  # remove the i == j diagonal, where s(0)^2 = 1/4
    return total / (n * (n - 1.0))


def kendall_test(sample: PairedSample) -> AssociationStatistic:
    """Concordance-sign correlation with normal-approximation p-value.

    tau = (1/(n(n-1))) sum over ordered pairs i != j of s(x_i - x_j)
    s(y_i - y_j), with s = +/-1 by sign and s(0) = 1/2.  Tie-free samples
    reduce to (C - D) / (C + D) and are counted in O(n log n); tied samples
    fall back to the direct double sum.  Two-sided p from the normal
    approximation with variance 2(2n+5)/(9n(n-1)).
    """
    n = sample.n
    if n < 3:
        raise ValueError(f"need at least 3 pairs, got {n}")
    if sample.has_tied_x() or sample.has_tied_y():
        tau = _kendall_tau_ties(sample.xs, sample.ys)
    else:
        x_ranks = _ranks(sample.xs)
        y_ranks = _ranks(sample.ys)
        image = np.empty(n, dtype=np.int64)
        image[x_ranks - 1] = y_ranks
        discordant = int(_kernels.count_discordant(image))
        tau = (n * (n - 1.0) - 4.0 * discordant) / (n * (n - 1.0))
    sd = math.sqrt(2.0 * (2 * n + 5) / (9.0 * n * (n - 1)))
    p = 2.0 * (1.0 - normal_cdf(abs(tau) / sd))
    return AssociationStatistic(name="Kendall", value=tau, p_value=min(p, 1.0), n=n)


def _hoeffding_numerator(y_ranks_in_x_order: np.ndarray) -> int:
    """Integer numerator of the statistic: A - 2(n-2)B + (n-2)(n-3)C."""
    n = y_ranks_in_x_order.size
    a_sum, b_sum, c_sum = _kernels.hoeffding_terms(
        np.ascontiguousarray(y_ranks_in_x_order, dtype=np.int64)
    )
    return int(a_sum) - 2 * (n - 2) * int(b_sum) + (n - 2) * (n - 3) * int(c_sum)


def hoeffding_statistic(sample: PairedSample) -> float:
    """The rank-based dependence-distance statistic (maximum 1/30).

    Delta = [A - 2(n-2) B + (n-2)(n-3) C] * (n-5)!/n!, with
    A = sum (rx_i-1)(rx_i-2)(ry_i-1)(ry_i-2), B = sum (rx_i-2)(ry_i-2) T_i,
    C = sum T_i (T_i-1), and T_i = #{j : x_j < x_i and y_j < y_i} counting
    strict inequalities in both coordinates.
    """
    n = sample.n
    if n < 5:
        raise ValueError(f"need at least 5 pairs, got {n}")
    if sample.has_tied_x() or sample.has_tied_y():
        raise TiesPresentError("this statistic requires tie-free coordinates")
    x_ranks = _ranks(sample.xs)
    y_ranks = _ranks(sample.ys)
    image = np.empty(n, dtype=np.int64)
    image[x_ranks - 1] = y_ranks
    numerator = _hoeffding_numerator(image)
    denom = n * (n - 1) * (n - 2) * (n - 3) * (n - 4)  # n!/(n-5)!
    return numerator / denom


def hoeffding_test(
    sample: PairedSample, mc_reps: int = 1000, seed: Optional[int] = None
) -> AssociationStatistic:
    """Dependence-distance test with a seeded Monte Carlo permutation p-value.

    p = (1 + #{permuted statistic >= observed}) / (mc_reps + 1), permuting
    the y-ranks with a counter-based generator.  Deterministic given
    (seed, mc_reps).
    """
    n = sample.n
    if mc_reps < 1:
        raise ValueError(f"mc_reps must be >= 1, got {mc_reps}")
    if n < 5:
        raise ValueError(f"need at least 5 pairs, got {n}")
    if sample.has_tied_x() or sample.has_tied_y():
        raise TiesPresentError("this statistic requires tie-free coordinates")
    x_ranks = _ranks(sample.xs)
    y_ranks = _ranks(sample.ys)
    image = np.empty(n, dtype=np.int64)
    image[x_ranks - 1] = y_ranks
    observed_num = _hoeffding_numerator(image)
    denom = n * (n - 1) * (n - 2) * (n - 3) * (n - 4)

    rng = np.random.Generator(np.random.Philox(seed))
    exceed = 0
    for _ in range(mc_reps):
        permuted = rng.permutation(image)
        # same integer denominator for every permutation: compare numerators
        if _hoeffding_numerator(permuted) >= observed_num:
            exceed += 1
    p = (1.0 + exceed) / (mc_reps + 1.0)
    return AssociationStatistic(
        name="Hoeffding", value=observed_num / denom, p_value=p, n=n
    )
