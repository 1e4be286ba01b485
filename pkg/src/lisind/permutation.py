"""Rank permutations of paired samples and longest monotone subsequence lengths.

A paired sample ((x_1, y_1), ..., (x_n, y_n)) with pairwise-distinct x's and
pairwise-distinct y's determines a permutation pi of {1..n}: sort the pairs by
x and read off the ranks of the y's, so that pi(rank(x_i)) = rank(y_i).  The
length of the longest strictly increasing subsequence of pi measures monotone
association and is the statistic behind :mod:`lisind.ln_test`.
"""

from __future__ import annotations

import enum
import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "EmptySampleError",
    "TiesPresentError",
    "TiePolicy",
    "PairedSample",
    "Permutation",
    "LisResult",
    "permutation_from_sample",
    "lis_lds",
]


class EmptySampleError(ValueError):
    """Raised when a paired sample contains no pairs."""


class TiesPresentError(ValueError):
    """Raised when tied coordinate values are found under ``TiePolicy.REJECT``."""


class TiePolicy(enum.Enum):
    """How to rank tied coordinate values.

    ``REJECT`` (default) refuses tied x's or tied y's: the exact null
    distribution of the test statistic assumes continuous marginals, under
    which ties occur with probability zero, and arbitrary tie-breaking would
    silently invalidate it.  ``RANDOM_BREAK`` applies a seeded uniform shuffle
    among tied values, which preserves the null distribution at the cost of
    injected randomness; it is an explicit opt-in.
    """

    REJECT = "reject"
    RANDOM_BREAK = "random-break"


@dataclass(frozen=True)
class PairedSample:
    """An ordered collection of (x, y) observation pairs.

    Immutable after construction.  All coordinates must be finite reals and
    there must be at least one pair.
    """

    pairs: tuple[tuple[float, float], ...]

    def __init__(self, pairs: Iterable[Sequence[float]]) -> None:
        normalized = tuple((float(x), float(y)) for x, y in pairs)
        if not normalized:
            raise EmptySampleError("a paired sample needs at least one pair")
        for x, y in normalized:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError(f"non-finite coordinate in pair ({x!r}, {y!r})")
        object.__setattr__(self, "pairs", normalized)

    @classmethod
    def from_arrays(cls, x: Iterable[float], y: Iterable[float]) -> "PairedSample":
        xa = np.asarray(list(x), dtype=float)
        ya = np.asarray(list(y), dtype=float)
        if xa.shape != ya.shape or xa.ndim != 1:
            raise ValueError("x and y must be one-dimensional and equally long")
        return cls(zip(xa.tolist(), ya.tolist()))

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def xs(self) -> np.ndarray:
        return np.array([p[0] for p in self.pairs], dtype=float)

    @property
    def ys(self) -> np.ndarray:
        return np.array([p[1] for p in self.pairs], dtype=float)

    def has_tied_x(self) -> bool:
        return len({p[0] for p in self.pairs}) < self.n

    def has_tied_y(self) -> bool:
        return len({p[1] for p in self.pairs}) < self.n


@dataclass(frozen=True)
class Permutation:
    """A bijection on {1..n}, stored as the image tuple (pi(1), ..., pi(n))."""

    image: tuple[int, ...]

    def __init__(self, image: Iterable[int]) -> None:
        img = tuple(int(v) for v in image)
        n = len(img)
        if n == 0:
            raise ValueError("a permutation needs at least one element")
        if sorted(img) != list(range(1, n + 1)):
            raise ValueError(f"image {img!r} is not a rearrangement of 1..{n}")
        object.__setattr__(self, "image", img)

    @property
    def n(self) -> int:
        return len(self.image)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.image, start=1):
            inv[v - 1] = i
        return Permutation(inv)


@dataclass(frozen=True)
class LisResult:
    """Lengths of the longest strictly increasing and decreasing subsequences."""

    lis_length: int
    lds_length: int


def _ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n of distinct values (stable argsort-of-argsort)."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.int64)
    ranks[order] = np.arange(1, values.size + 1)
    return ranks


def _ranks_random_ties(values: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Ranks 1..n, tied values ordered by a uniform shuffle."""
    jitter = rng.permutation(values.size)
    order = np.lexsort((jitter, values))
    ranks = np.empty(values.size, dtype=np.int64)
    ranks[order] = np.arange(1, values.size + 1)
    return ranks


def permutation_from_sample(
    sample: PairedSample,
    tie_policy: TiePolicy = TiePolicy.REJECT,
    seed: Optional[int] = None,
) -> Permutation:
    """Rank permutation of a paired sample: pi(rank(x_i)) = rank(y_i).

    Equivalently: sort the pairs by x ascending; output position i holds the
    rank of the i-th sorted pair's y within all y's.  The result is invariant
    under strictly increasing transforms applied to all x's or to all y's.

    With ``TiePolicy.REJECT`` tied x's or tied y's raise
    :class:`TiesPresentError`.  With ``TiePolicy.RANDOM_BREAK`` ties are
    broken by a uniform shuffle driven by ``seed`` (a counter-based
    generator; ``None`` draws fresh OS entropy).
    """
    xs, ys = sample.xs, sample.ys
    if tie_policy is TiePolicy.REJECT:
        if sample.has_tied_x() or sample.has_tied_y():
            raise TiesPresentError(
                "tied coordinate values; rerun with TiePolicy.RANDOM_BREAK "
                "or pre-process the data"
            )
        x_ranks = _ranks(xs)
        y_ranks = _ranks(ys)
    elif tie_policy is TiePolicy.RANDOM_BREAK:
        rng = np.random.Generator(np.random.Philox(seed))
        x_ranks = _ranks_random_ties(xs, rng)
        y_ranks = _ranks_random_ties(ys, rng)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown tie policy {tie_policy!r}")
    image = np.empty(sample.n, dtype=np.int64)
    image[x_ranks - 1] = y_ranks
    return Permutation(image.tolist())


def _patience_length(seq: Sequence[int]) -> int:
    """Length of the longest strictly increasing subsequence, O(n log n).

    Patience sorting: keep the smallest possible tail of an increasing
    subsequence of each length; each element replaces the first tail >= it
    (or opens a new pile).  The number of piles is the LIS length.
    """
    tails: list[int] = []
    for v in seq:
        i = bisect_left(tails, v)
        if i == len(tails):
            tails.append(v)
        else:
            tails[i] = v
    return len(tails)


def lis_lds(perm: Permutation) -> LisResult:
    """Longest increasing and decreasing subsequence lengths of a permutation.

    Both are computed by patience sorting in O(n log n); the decreasing length
    equals the increasing length of the value-reversed permutation
    (v -> n + 1 - v), since values are distinct.
    """
    seq = perm.image
    n = len(seq)
    lis = _patience_length(seq)
    lds = _patience_length([n + 1 - v for v in seq])
    return LisResult(lis_length=lis, lds_length=lds)
