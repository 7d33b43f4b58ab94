import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from uniqueboot.exact import distribution
from uniqueboot.moments import (
    AsymptoticRegime,
    asymptotic_mean,
    asymptotic_variance,
    brute_moment,
    central_moment,
    check_falling_sum_identity,
    check_stirling_power_identity,
    indicator_stats,
    mean_unique,
    raw_moment,
    variance_unique,
)

from oracles import unique_pmf_by_samples


def _brute_indicator_stats(N, A):
    """Presence probabilities of items 0 and 1 by enumerating samples."""
    from itertools import product

    total = N**A
    p0 = sum(1 for s in product(range(N), repeat=A) if 0 in s)
    p01 = sum(1 for s in product(range(N), repeat=A) if 0 in s and 1 in s)
    p = Fraction(p0, total)
    return p, Fraction(p01, total) - p * p


def test_indicator_stats_examples():
    s = indicator_stats(2, 1)
    assert s.p_present == Fraction(1, 2)
    assert s.pairwise_covariance == Fraction(-1, 4)
    assert indicator_stats(7, 0).p_present == 0
    assert indicator_stats(4, 4).p_present == Fraction(175, 256)
    assert indicator_stats(1, 5).pairwise_covariance == 0


@pytest.mark.parametrize("N, A", [(2, 1), (3, 2), (3, 4), (4, 3), (5, 3)])
def test_indicator_stats_against_enumeration(N, A):
    p, cov = _brute_indicator_stats(N, A)
    s = indicator_stats(N, A)
    assert s.p_present == p
    assert s.pairwise_covariance == cov
    assert s.variance == p * (1 - p)


def test_indicator_stats_rejects_zero():
    with pytest.raises(ValueError):
        indicator_stats(0, 1)


@given(st.integers(2, 50), st.integers(1, 50))
def test_indicator_covariance_non_positive(N, A):
    assert indicator_stats(N, A).pairwise_covariance <= 0


def test_mean_and_variance_examples():
    assert mean_unique(4, 4) == Fraction(175, 64)
    assert mean_unique(2, 2) == Fraction(3, 2)
    assert variance_unique(4, 4) == Fraction(1695, 4096)
    assert variance_unique(2, 2) == Fraction(1, 4)
    for A in range(1, 6):
        assert mean_unique(1, A) == 1
        assert variance_unique(1, A) == 0
    with pytest.raises(ValueError):
        mean_unique(0, 1)
    with pytest.raises(ValueError):
        variance_unique(0, 1)


def test_mean_variance_against_enumerated_table():
    pmf = unique_pmf_by_samples(4, 4)
    m = sum(k * p for k, p in pmf.items())
    v = sum(k * k * p for k, p in pmf.items()) - m * m
    assert (m, v) == (mean_unique(4, 4), variance_unique(4, 4))


def test_asymptotic_examples():
    one = AsymptoticRegime(1.0)
    assert asymptotic_mean(100, one) == pytest.approx(63.212, abs=1e-3)
    assert asymptotic_variance(100, one) == pytest.approx(100 * (math.exp(-1) - 2 * math.exp(-2)))
    assert asymptotic_variance(100, one) == pytest.approx(9.72, abs=5e-3)
    tiny = AsymptoticRegime(1e-12)
    assert asymptotic_mean(100, tiny) < 1e-9
    assert asymptotic_variance(100, tiny) < 1e-9
    with pytest.raises(ValueError):
        AsymptoticRegime(0.0)


def test_asymptotic_limits_near_exact_at_n_1000():
    one = AsymptoticRegime(1.0)
    m = float(mean_unique(1000, 1000))
    v = float(variance_unique(1000, 1000))
    assert abs(m - asymptotic_mean(1000, one)) / m < 1e-3
    assert abs(v - asymptotic_variance(1000, one)) / v < 1e-2


def test_raw_moment_examples():
    assert raw_moment(7, 3, 0) == 1
    assert raw_moment(4, 4, 1) == Fraction(175, 64)
    assert raw_moment(4, 4, 2) == Fraction(505, 64)


def test_central_moment_examples():
    assert central_moment(7, 3, 0) == 1
    assert central_moment(4, 4, 1) == 0
    assert central_moment(4, 4, 2) == Fraction(1695, 4096)


def test_moment_order_cap():
    with pytest.raises(ValueError):
        raw_moment(4, 4, 21)
    assert raw_moment(2, 3, 25, max_order=30) == brute_moment(distribution(2, 3), 25)
    with pytest.raises(ValueError):
        central_moment(4, 4, -1)


def test_brute_moment_examples():
    assert brute_moment(distribution(4, 4), 2) == Fraction(505, 64)
    assert brute_moment(distribution(1, 3), 5) == 1
    assert brute_moment(distribution(2, 2), 3, central=True) == 0


@pytest.mark.parametrize("N, A", [(1, 0), (1, 1), (3, 0), (2, 1), (5, 2), (2, 9), (9, 2)])
@pytest.mark.parametrize("t", range(0, 6))
def test_closed_forms_on_edge_cases(N, A, t):
    d = distribution(N, A)
    assert raw_moment(N, A, t) == brute_moment(d, t)
    assert central_moment(N, A, t) == brute_moment(d, t, central=True)


@given(st.integers(1, 20), st.integers(1, 20), st.integers(0, 5))
def test_closed_forms_property(N, A, t):
    d = distribution(N, A)
    assert raw_moment(N, A, t) == brute_moment(d, t)
    assert central_moment(N, A, t) == brute_moment(d, t, central=True)


def test_stirling_power_identity_examples():
    assert check_stirling_power_identity(4, 2, 1)
    assert check_stirling_power_identity(3, 3, 2)
    assert all(check_stirling_power_identity(A, k, 0) for A in range(8) for k in range(8))


def test_stirling_power_expansion_value():
    from uniqueboot.moments import stirling_power_expansion

    # 2 * S(4, 2) = S(5, 2) - S(4, 1) = 15 - 1
    assert stirling_power_expansion(4, 2, 1) == 14


def test_falling_sum_identity_examples():
    assert check_falling_sum_identity(5, 3, 0, 5)
    assert check_falling_sum_identity(5, 3, 5, 5)
    assert check_falling_sum_identity(4, 4, 1, 4)


def test_falling_sum_identity_precondition_is_an_error():
    with pytest.raises(ValueError):
        check_falling_sum_identity(5, 5, 0, 3)
    with pytest.raises(ValueError):
        check_falling_sum_identity(5, 5, -1, 5)


def test_falling_sum_identity_truncation_gap_returns_false():
    # K = min(N, A) is admissible but cuts off terms once w > 0
    assert check_falling_sum_identity(10, 2, 3, 2) is False
