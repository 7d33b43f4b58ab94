"""Moments of the unique-count distribution.

Closed forms come from viewing ``k`` as a sum of presence indicators, one per
original item.  Integer moments of any order are available through the
triple sums over ``u + v + w = t``; :func:`brute_moment` sums over the pmf
directly and serves as the independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .exact import UniqueCountDistribution, falling_factorial, stirling2

__all__ = [
    "AsymptoticRegime",
    "IndicatorStats",
    "MAX_MOMENT_ORDER",
    "asymptotic_mean",
    "asymptotic_variance",
    "brute_moment",
    "central_moment",
    "check_falling_sum_identity",
    "check_stirling_power_identity",
    "indicator_stats",
    "mean_unique",
    "raw_moment",
    "variance_unique",
]

MAX_MOMENT_ORDER = 20


def _require_N(N: int) -> None:
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")


def _miss(N: int, m: int, A: int) -> Fraction:
    """Probability that ``m`` given items are all missed: ((N - m) / N)**A."""
    return Fraction(N - m, N) ** A


@dataclass(frozen=True)
class IndicatorStats:
    p_present: Fraction
    variance: Fraction
    pairwise_covariance: Fraction


@dataclass(frozen=True)
class AsymptoticRegime:
    """Draw ratio ``alpha = A / N`` for the joint limit N, A -> infinity."""

    alpha: float

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")


def indicator_stats(N: int, A: int) -> IndicatorStats:
    _require_N(N)
    q1 = _miss(N, 1, A)
    cov = _miss(N, 2, A) - q1 * q1 if N >= 2 else Fraction(0)
    return IndicatorStats(p_present=1 - q1, variance=q1 - q1 * q1, pairwise_covariance=cov)


def mean_unique(N: int, A: int) -> Fraction:
    _require_N(N)
    return N * (1 - _miss(N, 1, A))


def variance_unique(N: int, A: int) -> Fraction:
    _require_N(N)
    q1 = _miss(N, 1, A)
    return N * (N - 1) * _miss(N, 2, A) + N * q1 - N * N * q1 * q1


def asymptotic_mean(N: float, regime: AsymptoticRegime) -> float:
    return N * (1.0 - math.exp(-regime.alpha))


def asymptotic_variance(N: float, regime: AsymptoticRegime) -> float:
    a = regime.alpha
    return N * (math.exp(-a) - (1.0 + a) * math.exp(-2.0 * a))


def _triples(t: int):
    for u in range(t + 1):
        for v in range(t - u + 1):
            yield u, v, t - u - v


def _check_order(t: int, max_order: int | None) -> None:
    if t < 0:
        raise ValueError(f"moment order must be non-negative, got {t}")
    cap = MAX_MOMENT_ORDER if max_order is None else max_order
    if t > cap:
        raise ValueError(f"moment order {t} exceeds cap {cap}; pass max_order to override")


def raw_moment(N: int, A: int, t: int, *, max_order: int | None = None) -> Fraction:
    """E[k**t] via the closed triple sum (no pmf evaluation)."""
    _require_N(N)
    _check_order(t, max_order)
    total = Fraction(0)
    for u, v, w in _triples(t):
        s = stirling2(v + w, v)
        if s == 0:
            continue
        fall = falling_factorial(N, v)
        if fall == 0:
            continue
        term = comb(t, u) * s * fall * (N - v) ** u * _miss(N, v, A)
        total += -term if v % 2 else term
    return total


def central_moment(N: int, A: int, t: int, *, max_order: int | None = None) -> Fraction:
    """E[(k - E[k])**t] via the closed triple sum."""
    _require_N(N)
    _check_order(t, max_order)
    q1 = _miss(N, 1, A)
    total = Fraction(0)
    for u, v, w in _triples(t):
        s = stirling2(v + w, v)
        if s == 0:
            continue
        fall = falling_factorial(N, v)
        if fall == 0:
            continue
        term = comb(t, u) * s * N**u * fall * _miss(N, v, A) * q1**u
        total += -term if (v + w) % 2 else term
    return total


def brute_moment(dist: UniqueCountDistribution, t: int, central: bool = False) -> Fraction:
    """Moment by direct summation over the exact pmf."""
    if central:
        mu = sum((k * p for k, p in enumerate(dist.probs)), Fraction(0))
        return sum(((k - mu) ** t * p for k, p in enumerate(dist.probs)), Fraction(0))
    return sum((Fraction(k) ** t * p for k, p in enumerate(dist.probs)), Fraction(0))


def stirling_power_expansion(A: int, k: int, t: int) -> int:
    total = 0
    for u, v, w in _triples(t):
        term = comb(t, u) * stirling2(v + w, v) * stirling2(A + u, k - v)
        total += -term if v % 2 else term
    return total


def check_stirling_power_identity(A: int, k: int, t: int) -> bool:
    """k**t S(A, k) against its expansion over u + v + w = t, in integers."""
    if min(A, k, t) < 0:
        raise ValueError("arguments must be non-negative")
    return k**t * stirling2(A, k) == stirling_power_expansion(A, k, t)


def check_falling_sum_identity(N: int, A: int, w: int, K: int) -> bool:
    """sum_{k<=K} N^(k) S(A, k - w) == N^(w) (N - w)**A, in integers.

    Raises ``ValueError`` when ``K < min(N, A)`` or ``w < 0``; a ``False``
    return means the identity itself failed.
    """
    if w < 0:
        raise ValueError(f"w must be non-negative, got {w}")
    if K < min(N, A):
        raise ValueError(f"K={K} must be at least min(N, A)={min(N, A)}")
    lhs = sum(falling_factorial(N, k) * stirling2(A, k - w) for k in range(K + 1))
    return lhs == falling_factorial(N, w) * (N - w) ** A
