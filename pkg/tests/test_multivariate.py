from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from uniqueboot.exact import distribution
from uniqueboot.moments import mean_unique, variance_unique
from uniqueboot.multivariate import (
    CategoryProfile,
    CompositionCapError,
    category_covariance,
    category_mean,
    category_variance,
    composition_count,
    compositions,
    joint_distribution,
    joint_pmf,
    marginal_category_distribution,
    pnqd_negativity_check,
)

from oracles import joint_pmf_by_occupancy, joint_pmf_by_samples

PROFILES = [(1, 1), (2, 2), (1, 3), (3, 2), (1, 1, 1), (2, 1, 3), (4,), (2, 3, 3)]


def _moment(pmf, fn):
    return sum((fn(k) * p for k, p in pmf.items()), Fraction(0))


def test_profile_validation():
    assert CategoryProfile([2, 3]).N == 5
    assert CategoryProfile([2, 3]).C == 2
    with pytest.raises(ValueError):
        CategoryProfile([])
    with pytest.raises(ValueError):
        CategoryProfile([2, 0])
    with pytest.raises(IndexError):
        category_mean((2, 2), 3, 3)


@pytest.mark.parametrize("total", range(0, 7))
@pytest.mark.parametrize("parts", range(1, 5))
def test_compositions_complete(total, parts):
    got = list(compositions(total, parts))
    expected = {c for c in product(range(total + 1), repeat=parts) if sum(c) == total}
    assert len(got) == composition_count(total, parts) == len(expected)
    assert set(got) == expected


def test_compositions_colex_order():
    assert list(compositions(2, 3)) == [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]


def test_joint_pmf_examples():
    assert joint_pmf((1, 1), 1, (1, 0)) == Fraction(1, 2)
    assert joint_pmf((2, 2), 2, (1, 1)) == Fraction(1, 2)
    assert joint_pmf((2, 2), 2, (2, 0)) == Fraction(1, 8)
    assert joint_pmf((2, 2), 2, (3, 0)) == 0
    with pytest.raises(ValueError):
        joint_pmf((2, 2), 2, (1,))


def test_joint_distribution_examples():
    assert joint_distribution((1, 1), 1).pmf == {(0, 1): Fraction(1, 2), (1, 0): Fraction(1, 2)}
    single = joint_distribution((3,), 2).pmf
    assert single == {(k,): p for k, p in enumerate(distribution(3, 2).probs) if p}
    pmf = joint_distribution((2, 2), 2).pmf
    assert len(pmf) == 5
    assert sum(pmf.values()) == 1


@pytest.mark.parametrize("profile", PROFILES)
@pytest.mark.parametrize("A", range(0, 5))
def test_joint_matches_sample_enumeration(profile, A):
    assert joint_distribution(profile, A).pmf == joint_pmf_by_samples(profile, A)


@pytest.mark.parametrize("profile", [(2, 2), (1, 3, 1), (3, 2)])
@pytest.mark.parametrize("A", range(0, 5))
def test_pointwise_joint_pmf_matches_distribution(profile, A):
    joint = joint_distribution(profile, A)
    ranges = [range(n + 1) for n in profile]
    for k in product(*ranges):
        assert joint_pmf(profile, A, k) == joint[k]


def test_printed_denominator_does_not_normalise():
    # with N_s**a_s in the denominator the two-singleton case gives 1 to
    # each of (1, 0) and (0, 1)
    def printed(sizes, A, k):
        from math import factorial

        from uniqueboot.exact import falling_factorial, stirling2

        total = Fraction(0)
        for a in compositions(A, len(sizes)):
            term = Fraction(factorial(A))
            for n, a_s, k_s in zip(sizes, a, k):
                term *= Fraction(falling_factorial(n, k_s) * stirling2(a_s, k_s), n**a_s * factorial(a_s))
            total += term
        return total

    assert printed((1, 1), 1, (1, 0)) == 1
    assert printed((1, 1), 1, (0, 1)) == 1
    assert joint_pmf((1, 1), 1, (1, 0)) + joint_pmf((1, 1), 1, (0, 1)) == 1


def test_composition_cap():
    with pytest.raises(CompositionCapError) as info:
        joint_distribution((2, 2, 2), 8, cap=10)
    assert info.value.count == composition_count(8, 3) == 45
    with pytest.raises(CompositionCapError):
        joint_pmf((2, 2, 2), 8, (1, 1, 1), cap=10)


def test_category_mean_examples():
    assert category_mean((2, 2), 4, 1) == Fraction(175, 128)
    assert category_mean((7,), 5, 1) == mean_unique(7, 5)
    assert category_mean((3, 1, 2), 0, 2) == 0


def test_category_variance_examples():
    pmf = joint_pmf_by_samples((2, 2), 2)
    m = _moment(pmf, lambda k: k[0])
    assert category_variance((2, 2), 2, 1) == _moment(pmf, lambda k: k[0] ** 2) - m * m
    assert category_variance((1, 3), 2, 1) == Fraction(63, 256)
    assert category_variance((2, 3), 0, 1) == 0


def test_category_covariance_examples():
    assert category_covariance((2, 2), 2, 1, 2) == Fraction(-17, 64)
    assert category_covariance((2, 2), 0, 1, 2) == 0
    assert category_covariance((1, 1), 1, 1, 2) == Fraction(-1, 4)
    with pytest.raises(ValueError):
        category_covariance((2, 2), 2, 1, 1)


@pytest.mark.parametrize("profile", PROFILES)
@pytest.mark.parametrize("A", range(0, 6))
def test_moment_formulas_against_joint(profile, A):
    pmf = joint_distribution(profile, A).pmf
    C = len(profile)
    for i in range(C):
        m = _moment(pmf, lambda k: k[i])
        assert category_mean(profile, A, i + 1) == m
        assert category_variance(profile, A, i + 1) == _moment(pmf, lambda k: k[i] ** 2) - m * m
        for j in range(C):
            if i != j:
                mj = _moment(pmf, lambda k: k[j])
                cov = _moment(pmf, lambda k: k[i] * k[j]) - m * mj
                assert category_covariance(profile, A, i + 1, j + 1) == cov


@given(st.lists(st.integers(1, 9), min_size=1, max_size=4), st.integers(0, 40))
def test_categories_partition_totals(sizes, A):
    prof = CategoryProfile(sizes)
    C, N = prof.C, prof.N
    assert sum(category_mean(prof, A, i) for i in range(1, C + 1)) == mean_unique(N, A)
    total_var = sum(category_variance(prof, A, i) for i in range(1, C + 1))
    total_var += sum(category_covariance(prof, A, i, j)
                     for i in range(1, C + 1) for j in range(1, C + 1) if i != j)
    assert total_var == variance_unique(N, A)


@given(st.lists(st.integers(1, 9), min_size=2, max_size=4), st.integers(1, 40))
def test_category_covariance_non_positive(sizes, A):
    assert category_covariance(sizes, A, 1, 2) <= 0


def test_marginal_examples():
    assert marginal_category_distribution((2, 2), 2, 1) == {
        0: Fraction(1, 4), 1: Fraction(5, 8), 2: Fraction(1, 8)}
    assert marginal_category_distribution((6,), 4, 1) == distribution(6, 4).as_dict()
    assert marginal_category_distribution((1, 99), 1, 1) == {0: Fraction(99, 100), 1: Fraction(1, 100)}
    with pytest.raises(IndexError):
        marginal_category_distribution((1, 99), 1, 3)


@pytest.mark.parametrize("profile", PROFILES)
@pytest.mark.parametrize("A", range(0, 6))
def test_marginal_consistency(profile, A):
    joint = joint_distribution(profile, A)
    for s in range(1, len(profile) + 1):
        marg = {k: p for k, p in marginal_category_distribution(profile, A, s).items() if p}
        assert marg == joint.marginal(s)


def test_occupancy_oracle_agrees_with_samples():
    for sizes in [(1, 2), (2, 1, 1), (3,)]:
        for A in range(0, 5):
            assert joint_pmf_by_occupancy(sizes, A) == joint_pmf_by_samples(sizes, A)


def test_pnqd_examples():
    assert pnqd_negativity_check(2, 1)
    assert pnqd_negativity_check(2, 0)
    with pytest.raises(ValueError):
        pnqd_negativity_check(1, 3)


def test_pnqd_quadrant_against_enumeration():
    # N = 3, A = 2: both of two items missed has prob (1/3)^2; one missed (2/3)^2
    both = sum(1 for s in product(range(3), repeat=2) if 0 not in s and 1 not in s)
    one = sum(1 for s in product(range(3), repeat=2) if 0 not in s)
    assert Fraction(both, 9) <= Fraction(one, 9) ** 2
    assert pnqd_negativity_check(3, 2)


def test_pnqd_exhaustive():
    assert all(pnqd_negativity_check(N, A) for N in range(2, 41) for A in range(0, 41))
