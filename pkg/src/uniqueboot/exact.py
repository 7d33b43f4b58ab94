"""Exact distribution of the number of unique items in a bootstrap sample.

Drawing ``A`` items with replacement from ``N`` equally likely originals
gives ``k`` distinct items with probability

    P(k) = N^(k) * S(A, k) / N**A

where ``N^(k)`` is the falling factorial and ``S`` a Stirling number of the
second kind.  Everything here stays in Python integers and
:class:`fractions.Fraction`; no floats are involved.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "StirlingTable",
    "UniqueCountDistribution",
    "cdf_unique",
    "distribution",
    "excluded_distribution",
    "falling_factorial",
    "pmf_unique",
    "stirling2",
    "unique_count_weights",
]


class StirlingTable:
    """Grow-only cache of rows of Stirling numbers of the second kind.

    Row ``n`` is a tuple ``(S(n, 0), ..., S(n, n))``.  Rows are published by
    appending an immutable tuple under a lock, so readers never observe a
    partially built row.
    """

    def __init__(self) -> None:
        self._rows: list[tuple[int, ...]] = [(1,)]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._rows)

    def row(self, n: int) -> tuple[int, ...]:
        if n < 0:
            raise ValueError(f"row index must be non-negative, got {n}")
        rows = self._rows
        if n < len(rows):
            return rows[n]
        with self._lock:
            rows = self._rows
            while len(rows) <= n:
                prev = rows[-1]
                m = len(rows)
                new = [0] * (m + 1)
                for j in range(1, m):
                    new[j] = j * prev[j] + prev[j - 1]
                new[m] = 1
                rows.append(tuple(new))
            return rows[n]

    def __call__(self, n: int, j: int) -> int:
        if n < 0 or j < 0 or j > n:
            return 0
        return self.row(n)[j]


_STIRLING = StirlingTable()


def stirling2(n: int, j: int) -> int:
    """Stirling number of the second kind S(n, j); zero off the triangle."""
    return _STIRLING(n, j)


def stirling_row(n: int) -> tuple[int, ...]:
    return _STIRLING.row(n)


def falling_factorial(n: int, j: int) -> int:
    """n (n-1) ... (n-j+1); 1 for j == 0 and 0 for j > n."""
    if j < 0:
        raise ValueError(f"j must be non-negative, got {j}")
    if j > n:
        return 0
    out = 1
    for i in range(n - j + 1, n + 1):
        out *= i
    return out


def _check_params(N: int, A: int) -> None:
    if N < 1:
        raise ValueError(f"N must be at least 1 (empty original sample), got {N}")
    if A < 0:
        raise ValueError(f"A must be non-negative, got {A}")


def unique_count_weights(N: int, A: int) -> list[int]:
    """Counts of ordered samples with k = 0..min(N, A) unique items.

    The counts sum to ``N**A``.
    """
    _check_params(N, A)
    srow = stirling_row(A)
    top = min(N, A)
    out = []
    fall = 1
    for k in range(top + 1):
        out.append(fall * srow[k])
        fall *= N - k
    return out


def pmf_unique(N: int, A: int, k: int) -> Fraction:
    _check_params(N, A)
    if k < 0 or k > min(N, A):
        return Fraction(0)
    return Fraction(falling_factorial(N, k) * stirling2(A, k), N**A)


@dataclass(frozen=True)
class UniqueCountDistribution:
    """Exact pmf of the unique-item count for ``N`` originals and ``A`` draws.

    ``probs[k]`` holds P(K = k) for k = 0..min(N, A).
    """

    N: int
    A: int
    probs: tuple[Fraction, ...]

    @property
    def support(self) -> range:
        return range(len(self.probs))

    def pmf(self, k: int) -> Fraction:
        if 0 <= k < len(self.probs):
            return self.probs[k]
        return Fraction(0)

    def cdf(self, k: int) -> Fraction:
        return cdf_unique(self, k)

    def cumulative(self) -> list[Fraction]:
        out = []
        acc = Fraction(0)
        for p in self.probs:
            acc += p
            out.append(acc)
        return out

    def as_dict(self) -> dict[int, Fraction]:
        return dict(enumerate(self.probs))


def distribution(N: int, A: int) -> UniqueCountDistribution:
    weights = unique_count_weights(N, A)
    total = N**A
    return UniqueCountDistribution(N, A, tuple(Fraction(w, total) for w in weights))


def cdf_unique(dist: UniqueCountDistribution, k: int) -> Fraction:
    """P(K <= k)."""
    if k < 0:
        return Fraction(0)
    if k >= len(dist.probs) - 1:
        return Fraction(1)
    return sum(dist.probs[: k + 1], Fraction(0))


def excluded_distribution(dist: UniqueCountDistribution) -> dict[int, Fraction]:
    """Pmf of the excluded count m0 = N - k (the number of empty urns)."""
    return {dist.N - k: p for k, p in enumerate(dist.probs)}
