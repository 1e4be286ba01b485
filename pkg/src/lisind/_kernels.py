"""Compiled hot loops for per-replication statistics in simulation studies.

Each kernel has a pure-Python counterpart elsewhere in the package (patience
sorting in :mod:`lisind.permutation`, pair counting in
:mod:`lisind.reference`); the test suite cross-checks the two routes.  All
kernels take tie-free integer rank arrays.
"""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = ["patience_lis", "count_discordant", "hoeffding_terms"]


@njit(cache=True)
def patience_lis(seq):
    """Length of the longest strictly increasing subsequence of distinct ints."""
    n = seq.shape[0]
    tails = np.empty(n, np.int64)
    m = 0
    for idx in range(n):
        v = seq[idx]
        lo, hi = 0, m
        while lo < hi:
            mid = (lo + hi) >> 1
            if tails[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        tails[lo] = v
        if lo == m:
            m += 1
    return m


@njit(cache=True)
def count_discordant(seq):
    """Discordant-pair count of a permutation: inversions via mergesort."""
    n = seq.shape[0]
    a = seq.copy()
    buf = np.empty(n, np.int64)
    inv = 0
    width = 1
    while width < n:
        for start in range(0, n, 2 * width):
            mid = min(start + width, n)
            end = min(start + 2 * width, n)
            i, j, k = start, mid, start
            while i < mid and j < end:
                if a[i] <= a[j]:
                    buf[k] = a[i]
                    i += 1
                else:
                    buf[k] = a[j]
                    inv += mid - i
                    j += 1
                k += 1
            while i < mid:
                buf[k] = a[i]
                i += 1
                k += 1
            while j < end:
                buf[k] = a[j]
                j += 1
                k += 1
        a, buf = buf, a
        width *= 2
    return inv


@njit(cache=True)
def hoeffding_terms(y_ranks):
    """(A, B, C) sums of the dependence-distance statistic, exact integers.

    Input: y-ranks 1..n listed in x-rank order (so point i has x-rank i+1).
    T_i = #{j : x_j < x_i and y_j < y_i} is accumulated with a Fenwick tree
    over y-ranks while scanning in x order;
      A = sum (rx-1)(rx-2)(ry-1)(ry-2),
      B = sum (rx-2)(ry-2) T_i,
      C = sum T_i (T_i - 1).
    """
    n = y_ranks.shape[0]
    tree = np.zeros(n + 1, np.int64)
    a_sum = np.int64(0)
    b_sum = np.int64(0)
    c_sum = np.int64(0)
    for i in range(n):
        yv = y_ranks[i]
        t = np.int64(0)
        j = yv - 1
        while j > 0:
            t += tree[j]
            j -= j & (-j)
        rx = i + 1
        a_sum += (rx - 1) * (rx - 2) * (yv - 1) * (yv - 2)
        b_sum += (rx - 2) * (yv - 2) * t
        c_sum += t * (t - 1)
        j = yv
        while j <= n:
            tree[j] += 1
            j += j & (-j)
    return a_sum, b_sum, c_sum
