"""Unique counts broken down by category.

Items are split into categories of sizes ``N_1 .. N_C``.  Conditioning on
how the ``A`` draws split across categories (a composition ``a``) gives

    P(k) = A! / N**A * sum_a prod_s N_s^(k_s) S(a_s, k_s) / a_s!

Internally the sum is kept in integers: the count of ordered samples behind
each ``k`` is ``multinomial(A; a) * prod_s N_s^(k_s) S(a_s, k_s)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterator, Sequence

from .exact import distribution, falling_factorial, stirling2, stirling_row

__all__ = [
    "CategoryProfile",
    "CompositionCapError",
    "JointUniqueDistribution",
    "category_covariance",
    "category_mean",
    "category_variance",
    "compositions",
    "joint_distribution",
    "joint_pmf",
    "marginal_category_distribution",
    "pnqd_negativity_check",
]

DEFAULT_COMPOSITION_CAP = 2_000_000


class CompositionCapError(RuntimeError):
    def __init__(self, count: int, cap: int) -> None:
        super().__init__(f"{count} compositions exceed the cap of {cap}")
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class CategoryProfile:
    sizes: tuple[int, ...]

    def __init__(self, sizes: Sequence[int]) -> None:
        sizes = tuple(int(s) for s in sizes)
        if not sizes:
            raise ValueError("need at least one category")
        if any(s < 1 for s in sizes):
            raise ValueError(f"category sizes must be positive, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def N(self) -> int:
        return sum(self.sizes)

    @property
    def C(self) -> int:
        return len(self.sizes)

    def index(self, i: int) -> int:
        """Validate a 1-based category index and return it 0-based."""
        if not 1 <= i <= self.C:
            raise IndexError(f"category index {i} outside 1..{self.C}")
        return i - 1


def _profile(profile: CategoryProfile | Sequence[int]) -> CategoryProfile:
    return profile if isinstance(profile, CategoryProfile) else CategoryProfile(profile)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` non-negative integers summing to ``total``.

    Iterative (Nijenhuis-Wilf successor rule); the leading parts vary
    fastest, so the order is colexicographic.
    """
    if parts < 1 or total < 0:
        return
    r = [0] * parts
    r[0] = total
    yield tuple(r)
    t = total
    h = 0
    while r[-1] != total:
        if t > 1:
            h = 0
        h += 1
        t = r[h - 1]
        r[h - 1] = 0
        r[0] = t - 1
        r[h] += 1
        yield tuple(r)


def composition_count(total: int, parts: int) -> int:
    return comb(total + parts - 1, parts - 1)


def _check_cap(A: int, C: int, cap: int | None) -> None:
    if cap is None:
        return
    count = composition_count(A, C)
    if count > cap:
        raise CompositionCapError(count, cap)


def _multinomial(parts: Sequence[int]) -> int:
    out = 1
    run = 0
    for a in parts:
        run += a
        out *= comb(run, a)
    return out


def joint_pmf(profile: CategoryProfile | Sequence[int], A: int, k: Sequence[int], *,
              cap: int | None = DEFAULT_COMPOSITION_CAP) -> Fraction:
    prof = _profile(profile)
    if len(k) != prof.C:
        raise ValueError(f"k has {len(k)} entries, profile has {prof.C} categories")
    if A < 0:
        raise ValueError(f"A must be non-negative, got {A}")
    _check_cap(A, prof.C, cap)
    falls = [falling_factorial(n, ks) if ks >= 0 else 0 for n, ks in zip(prof.sizes, k)]
    if any(f == 0 for f in falls):
        return Fraction(0)
    fall = 1
    for f in falls:
        fall *= f
    total = 0
    for a in compositions(A, prof.C):
        term = 1
        for a_s, k_s in zip(a, k):
            term *= stirling2(a_s, k_s)
            if term == 0:
                break
        if term:
            total += _multinomial(a) * term
    return Fraction(fall * total, prof.N**A)


@dataclass(frozen=True)
class JointUniqueDistribution:
    """Exact joint pmf of per-category unique counts (nonzero entries only)."""

    profile: CategoryProfile
    A: int
    pmf: dict[tuple[int, ...], Fraction]

    def __getitem__(self, k: Sequence[int]) -> Fraction:
        return self.pmf.get(tuple(k), Fraction(0))

    def marginal(self, s: int) -> dict[int, Fraction]:
        """Coordinate marginal of category ``s`` (1-based)."""
        i = self.profile.index(s)
        out: dict[int, Fraction] = {}
        for k, p in self.pmf.items():
            out[k[i]] = out.get(k[i], Fraction(0)) + p
        return dict(sorted(out.items()))

    def expect(self, fn) -> Fraction:
        return sum((fn(k) * p for k, p in self.pmf.items()), Fraction(0))


def _category_table(n: int, a: int) -> list[tuple[int, int]]:
    """(k, N_s^(k) S(a, k)) pairs with nonzero weight."""
    row = stirling_row(a)
    out = []
    fall = 1
    for k in range(min(n, a) + 1):
        w = fall * row[k]
        if w:
            out.append((k, w))
        fall *= n - k
    return out


def joint_distribution(profile: CategoryProfile | Sequence[int], A: int, *,
                       cap: int | None = DEFAULT_COMPOSITION_CAP) -> JointUniqueDistribution:
    prof = _profile(profile)
    if A < 0:
        raise ValueError(f"A must be non-negative, got {A}")
    _check_cap(A, prof.C, cap)
    counts: dict[tuple[int, ...], int] = {}
    for a in compositions(A, prof.C):
        mult = _multinomial(a)
        tables = [_category_table(n, a_s) for n, a_s in zip(prof.sizes, a)]
        for combo in product(*tables):
            w = mult
            for _, ws in combo:
                w *= ws
            key = tuple(ks for ks, _ in combo)
            counts[key] = counts.get(key, 0) + w
    total = prof.N**A
    pmf = {k: Fraction(c, total) for k, c in sorted(counts.items())}
    return JointUniqueDistribution(prof, A, pmf)


def _miss(N: int, m: int, A: int) -> Fraction:
    return Fraction(N - m, N) ** A


def category_mean(profile: CategoryProfile | Sequence[int], A: int, i: int) -> Fraction:
    prof = _profile(profile)
    n_i = prof.sizes[prof.index(i)]
    return n_i * (1 - _miss(prof.N, 1, A))


def category_variance(profile: CategoryProfile | Sequence[int], A: int, i: int) -> Fraction:
    prof = _profile(profile)
    n_i = prof.sizes[prof.index(i)]
    N = prof.N
    q1 = _miss(N, 1, A)
    q2 = _miss(N, 2, A) if N >= 2 else Fraction(0)
    return n_i * (n_i - 1) * q2 + n_i * q1 - n_i * n_i * q1 * q1


def category_covariance(profile: CategoryProfile | Sequence[int], A: int, i: int, j: int) -> Fraction:
    prof = _profile(profile)
    n_i = prof.sizes[prof.index(i)]
    n_j = prof.sizes[prof.index(j)]
    if i == j:
        raise ValueError("i == j: use category_variance")
    N = prof.N
    q1 = _miss(N, 1, A)
    return n_i * n_j * (_miss(N, 2, A) - q1 * q1)


def marginal_category_distribution(profile: CategoryProfile | Sequence[int], A: int,
                                   s: int) -> dict[int, Fraction]:
    """Pmf of k_s: binomial split of the draws, then the single-sample law."""
    prof = _profile(profile)
    n_s = prof.sizes[prof.index(s)]
    N = prof.N
    if A < 0:
        raise ValueError(f"A must be non-negative, got {A}")
    out = [Fraction(0)] * (min(n_s, A) + 1)
    for a in range(A + 1):
        hit = Fraction(comb(A, a) * n_s**a * (N - n_s) ** (A - a), N**A)
        if hit == 0:
            continue
        for k, p in enumerate(distribution(n_s, a).probs):
            out[k] += hit * p
    return dict(enumerate(out))


def pnqd_negativity_check(N: int, A: int) -> bool:
    """Negative indicator covariance and the quadrant inequality at (1/2, 1/2).

    For binary indicators the only informative thresholds are between 0 and
    1, where the inequality reads P(d_i = 0, d_j = 0) <= P(d_i = 0)**2.
    """
    if N < 2 or A < 0:
        raise ValueError(f"need N >= 2 and A >= 0, got N={N}, A={A}")
    both_missed = _miss(N, 2, A)
    one_missed = _miss(N, 1, A)
    return both_missed - one_missed**2 <= 0 and both_missed <= one_missed * one_missed
