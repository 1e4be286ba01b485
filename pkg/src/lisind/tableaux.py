"""Exact null distribution of the longest-increasing-subsequence length.

For a uniformly random permutation of n symbols, the number with LIS length
exactly k is, by the Robinson-Schensted correspondence, the sum of f(shape)^2
over all integer partitions of n whose first part is k, where f(shape) is the
number of standard Young tableaux of that shape (hook-length formula).  This
module provides the shape/hook/count primitives, an exact big-integer
distribution table for all n up to a cap, and CSV persistence for it.

Two independent routes produce the counts: :func:`count_perms_with_lis`
enumerates partitions and applies the hook-length formula directly, while
:func:`build_table` uses a determinant recurrence (see
:mod:`lisind._condensation`) that computes every row at once in seconds.
They are cross-checked in the test suite; ``build_table`` additionally
re-validates each row sum against n! exactly before returning.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping, Optional

import numpy as np

from . import _condensation

__all__ = [
    "ShapePartition",
    "ExactLnTable",
    "TableFormatError",
    "enumerate_partitions",
    "hook_numbers",
    "count_syt",
    "count_perms_with_lis",
    "build_table",
    "save_table",
    "load_table",
    "packaged_table",
]

_CSV_HEADER = "n,k,count,probability"


class TableFormatError(ValueError):
    """Raised when a persisted table file is malformed or fails validation."""


@dataclass(frozen=True)
class ShapePartition:
    """An integer partition (weakly decreasing positive parts) as a diagram shape.

    The first part is the number of columns; the number of parts is the
    number of rows.
    """

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]) -> None:
        p = tuple(int(v) for v in parts)
        if not p:
            raise ValueError("a shape needs at least one part")
        if any(v < 1 for v in p):
            raise ValueError(f"parts must be positive, got {p!r}")
        if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"parts must be weakly decreasing, got {p!r}")
        object.__setattr__(self, "parts", p)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def num_rows(self) -> int:
        return len(self.parts)

    @property
    def num_cols(self) -> int:
        return self.parts[0]

    def conjugate(self) -> "ShapePartition":
        """Transpose of the diagram: part j is the count of rows with >= j cells."""
        cols = self.parts[0]
        conj = [0] * cols
        for row_len in self.parts:
            for c in range(row_len):
                conj[c] += 1
        return ShapePartition(conj)


def _descending_partitions(n: int, max_part: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """All partitions of n with parts <= max_part, descending lexicographic.

    Iterative in-place successor computation: amortized-constant work per
    partition besides materializing the output tuple.
    """
    if n == 0:
        yield ()
        return
    first = n if max_part is None else min(n, max_part)
    # initial partition: as many `first`-size parts as fit, then the remainder
    a: list[int] = []
    rem = n
    while rem >= first:
        a.append(first)
        rem -= first
    if rem:
        a.append(rem)
    while True:
        yield tuple(a)
        # find the rightmost part > 1; shrink it and repack the tail greedily
        j = len(a) - 1
        ones = 0
        while j >= 0 and a[j] == 1:
            ones += 1
            j -= 1
        if j < 0:
            return
        a[j] -= 1
        rem = ones + 1
        del a[j + 1 :]
        cap = a[j]
        while rem > cap:
            a.append(cap)
            rem -= cap
        if rem:
            a.append(rem)


def enumerate_partitions(
    n: int, visitor: Optional[Callable[[ShapePartition], None]] = None
) -> int:
    """Visit every integer partition of n exactly once; return how many there are.

    Partitions are produced in descending lexicographic order by an iterative
    constant-amortized-time successor rule.  ``visitor`` (if given) receives
    each partition as a :class:`ShapePartition`.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    count = 0
    for parts in _descending_partitions(n):
        count += 1
        if visitor is not None:
            visitor(ShapePartition(parts))
    return count


def hook_numbers(shape: ShapePartition) -> list[int]:
    """Hook length of every cell, row-major: arm + leg + 1.

    For cell (r, c) (0-based) the hook counts the cell itself, the cells to
    its right in row r, and the cells below it in column c.
    """
    parts = shape.parts
    conj = shape.conjugate().parts
    hooks: list[int] = []
    for r, row_len in enumerate(parts):
        for c in range(row_len):
            hooks.append((row_len - c - 1) + (conj[c] - r - 1) + 1)
    return hooks


def count_syt(shape: ShapePartition) -> int:
    """Number of standard Young tableaux of a shape: n! / (product of hooks).

    Exact big-integer arithmetic; the division is checked to be remainder-free
    (a nonzero remainder would mean the hook computation is wrong).
    """
    n = shape.n
    denom = math.prod(hook_numbers(shape))
    quotient, remainder = divmod(math.factorial(n), denom)
    if remainder:
        raise ArithmeticError(
            f"hook product {denom} does not divide {n}! for shape {shape.parts!r}"
        )
    return quotient


def count_perms_with_lis(n: int, k: int) -> int:
    """#{permutations of n symbols with LIS length exactly k}, exact.

    Sums count_syt(shape)^2 over all partitions of n whose first part is k
    (Robinson-Schensted: LIS = first-row length, LDS = row count).  Intended
    for moderate n; :func:`build_table` computes all rows at once much faster.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    total = 0
    for rest in _descending_partitions(n - k, max_part=k):
        f = count_syt(ShapePartition((k,) + rest))
        total += f * f
    return total


@dataclass(frozen=True)
class ExactLnTable:
    """Exact distribution of the LIS length of a uniform random permutation.

    ``counts[(n, k)]`` is the exact big-integer number of permutations of n
    symbols with LIS length k; ``probabilities[(n, k)]`` is the same divided
    by n!, rounded once to the nearest float; ``modes[n]`` is the k maximizing
    the probability (smallest k on ties).
    """

    n_max: int
    counts: Mapping[tuple[int, int], int]
    probabilities: Mapping[tuple[int, int], float]
    modes: Mapping[int, int]

    def _check_n(self, n: int) -> None:
        if not 1 <= n <= self.n_max:
            raise KeyError(f"table has no row for n={n} (covers 1..{self.n_max})")

    def counts_row(self, n: int) -> tuple[int, ...]:
        self._check_n(n)
        return tuple(self.counts[(n, k)] for k in range(1, n + 1))

    def prob_row(self, n: int) -> np.ndarray:
        self._check_n(n)
        return np.array([self.probabilities[(n, k)] for k in range(1, n + 1)])

    def cdf_row(self, n: int) -> np.ndarray:
        """F(k) = P(LIS <= k) for k = 1..n (index k-1)."""
        return np.cumsum(self.prob_row(n))

    def mode(self, n: int) -> int:
        self._check_n(n)
        return self.modes[n]


def build_table(n_max: int = 100) -> ExactLnTable:
    """Exact LIS-length distribution for every n up to ``n_max``.

    Deterministic; all counts exact big integers.  Every row is re-validated
    against the identities sum_k c(n,k) = n! and c(n,1) = c(n,n) = 1; any
    violation raises rather than returning a silently wrong table.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    rows = _condensation.lis_length_counts(n_max)
    counts: dict[tuple[int, int], int] = {}
    probabilities: dict[tuple[int, int], float] = {}
    modes: dict[int, int] = {}
    for n, row in enumerate(rows, start=1):
        fact = math.factorial(n)
        if sum(row) != fact:
            raise RuntimeError(
                f"internal consistency failure: counts for n={n} do not sum to n!"
            )
        if row[0] != 1 or row[-1] != 1 or any(c <= 0 for c in row):
            raise RuntimeError(f"internal consistency failure in row n={n}")
        best_k = 1
        for k in range(2, n + 1):
            if row[k - 1] > row[best_k - 1]:
                best_k = k
        modes[n] = best_k
        for k, c in enumerate(row, start=1):
            counts[(n, k)] = c
            probabilities[(n, k)] = float(Fraction(c, fact))
    return ExactLnTable(
        n_max=n_max, counts=counts, probabilities=probabilities, modes=modes
    )


def _row_digest(counts_in_order: Iterable[int]) -> str:
    digest = hashlib.sha256()
    for c in counts_in_order:
        digest.update(str(c).encode("ascii"))
        digest.update(b"\n")
    return digest.hexdigest()


def save_table(table: ExactLnTable, path: str | Path) -> None:
    """Write a table as UTF-8 CSV with an integrity checksum.

    Format: header ``n,k,count,probability``; one row per (n, k) sorted by
    (n, k); counts as exact decimal strings; probabilities with 17 significant
    digits; a final comment line ``# checksum: <hex>`` holding the SHA-256 of
    the newline-joined count strings in row order.
    """
    lines = [_CSV_HEADER]
    ordered_counts = []
    for n in range(1, table.n_max + 1):
        for k in range(1, n + 1):
            c = table.counts[(n, k)]
            ordered_counts.append(c)
            lines.append(f"{n},{k},{c},{table.probabilities[(n, k)]:.17g}")
    lines.append(f"# checksum: {_row_digest(ordered_counts)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_table(path: str | Path) -> ExactLnTable:
    """Read a table written by :func:`save_table`, re-validating everything.

    Validation order: shape/parse errors first, then exact row sums against
    n!, then the checksum line (optional for hand-written files, but when
    present it must match), then probability agreement with count/n!.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _CSV_HEADER:
        raise TableFormatError(f"expected header '{_CSV_HEADER}'")
    checksum: Optional[str] = None
    rows: list[tuple[int, int, int, float]] = []
    for ln in lines[1:]:
        if ln.startswith("#"):
            if ln.startswith("# checksum:"):
                checksum = ln.split(":", 1)[1].strip()
            continue
        fields = ln.split(",")
        if len(fields) != 4:
            raise TableFormatError(f"malformed row {ln!r}")
        try:
            n, k, count = int(fields[0]), int(fields[1]), int(fields[2])
            prob = float(fields[3])
        except ValueError as exc:
            raise TableFormatError(f"malformed row {ln!r}") from exc
        rows.append((n, k, count, prob))
    if not rows:
        raise TableFormatError("no data rows")

    n_max = rows[-1][0]
    expected = [(n, k) for n in range(1, n_max + 1) for k in range(1, n + 1)]
    if [(n, k) for n, k, _, _ in rows] != expected:
        raise TableFormatError("rows are not exactly (n,k) sorted for n=1..n_max")

    counts = {(n, k): c for n, k, c, _ in rows}
    for n in range(1, n_max + 1):
        row_sum = sum(counts[(n, k)] for k in range(1, n + 1))
        if row_sum != math.factorial(n):
            raise TableFormatError(f"row-sum validation failed for n={n}")
    if checksum is not None:
        actual = _row_digest(c for _, _, c, _ in rows)
        if actual != checksum:
            raise TableFormatError("checksum mismatch")

    probabilities: dict[tuple[int, int], float] = {}
    modes: dict[int, int] = {}
    for n in range(1, n_max + 1):
        fact = math.factorial(n)
        best_k = 1
        for k in range(1, n + 1):
            derived = float(Fraction(counts[(n, k)], fact))
            probabilities[(n, k)] = derived
            if counts[(n, k)] > counts[(n, best_k)]:
                best_k = k
        modes[n] = best_k
    for n, k, _, prob in rows:
        if abs(prob - probabilities[(n, k)]) > 1e-12:
            raise TableFormatError(f"probability mismatch at n={n}, k={k}")
    return ExactLnTable(
        n_max=n_max, counts=counts, probabilities=probabilities, modes=modes
    )


_PACKAGED: Optional[ExactLnTable] = None


def packaged_table() -> ExactLnTable:
    """The pre-built distribution table shipped with the package (n up to 100)."""
    global _PACKAGED
    if _PACKAGED is None:
        from importlib.resources import files

        resource = files("lisind").joinpath("data/ln_table_n100.csv")
        _PACKAGED = load_table(Path(str(resource)))
    return _PACKAGED
