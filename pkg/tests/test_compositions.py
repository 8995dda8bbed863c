import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cvlab.compositions import (
    BudgetExceeded, bounded_compositions, composition_weight, count_compositions,
    num_compositions, weighted_linear_sum, weighted_quadratic_sum, weighted_sum,
)
from cvlab.exact import DomainError, binomial


def brute_force(caps, m):
    """All bounded compositions by filtering the full box, sorted like the enumerator."""
    box = itertools.product(*(range(n + 1) for n in caps))
    return sorted((k for k in box if sum(k) == m), reverse=True)


caps_st = st.lists(st.integers(1, 4), min_size=1, max_size=4)


@pytest.mark.parametrize("caps, m, expected", [
    ((2, 1), 2, [(2, 0), (1, 1)]),
    ((1, 1, 1), 2, [(1, 1, 0), (1, 0, 1), (0, 1, 1)]),
    ((5,), 3, [(3,)]),
    ((2, 2), 0, [(0, 0)]),
    ((2, 2), 5, []),
])
def test_enumeration_examples(caps, m, expected):
    assert list(bounded_compositions(caps, m)) == expected


def test_negative_m_rejected():
    with pytest.raises(DomainError):
        list(bounded_compositions((2, 2), -1))


def test_bad_caps_rejected():
    with pytest.raises(DomainError):
        list(bounded_compositions((2, 0), 1))
    with pytest.raises(DomainError):
        list(bounded_compositions((), 0))


@given(caps_st, st.integers(0, 17))
def test_matches_brute_force(caps, m):
    got = list(bounded_compositions(caps, m))
    assert got == brute_force(caps, m)
    assert len(set(got)) == len(got)
    assert num_compositions(caps, m) == len(got)


@pytest.mark.parametrize("k, caps, expected", [((1, 1), (2, 1), 2), ((2, 0), (2, 1), 1), ((1, 1, 0), (2, 2, 2), 4)])
def test_weight_examples(k, caps, expected):
    assert composition_weight(k, caps) == expected


def test_weighted_linear_sum_examples():
    # direct sums frozen from hand enumeration
    assert weighted_linear_sum((2, 1), 2, 1) == 4
    assert weighted_linear_sum((1, 1), 1, 2) == 1
    assert weighted_linear_sum((3, 3), 6, 1) == 3


def test_count_examples():
    assert count_compositions((2, 3), 2) == 10
    assert count_compositions((1, 1), 1) == 2
    for n in range(1, 8):
        for k in range(n + 1):
            assert count_compositions((n,), k) == binomial(n, k)


def test_multinomial_vandermonde_exhaustive():
    for s in range(1, 5):
        for caps in itertools.product(range(1, 6), repeat=s):
            N = sum(caps)
            if N > 20:
                continue
            for m in range(N + 1):
                assert count_compositions(caps, m) == binomial(N, m)


@settings(max_examples=60)
@given(caps_st, st.data())
def test_counting_lemmas(caps, data):
    N = sum(caps)
    m = data.draw(st.integers(1, N))
    s = len(caps)
    for j in range(1, s + 1):
        nj = caps[j - 1]
        assert weighted_linear_sum(caps, m, j) == nj * binomial(N - 1, m - 1)
        if N >= 2:
            assert weighted_quadratic_sum(caps, m, j, j) == (
                nj * binomial(N - 2, m - 1) + nj * nj * binomial(N - 2, m - 2))
            for i in range(1, s + 1):
                if i != j:
                    assert weighted_quadratic_sum(caps, m, i, j) == caps[i - 1] * nj * binomial(N - 2, m - 2)


def test_budget_fails_fast():
    with pytest.raises(BudgetExceeded) as info:
        next(bounded_compositions((10,) * 10, 50, budget=1000))
    assert info.value.needed > 1000
    assert list(bounded_compositions((2, 2), 2, budget=3)) == [(2, 0), (1, 1), (0, 2)]


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("CVLAB_BUDGET", "2")
    with pytest.raises(BudgetExceeded):
        count_compositions((2, 2), 2)


def test_weighted_sum_start_value():
    assert weighted_sum((1, 1), 1, lambda k: k[0], start=10) == 11
