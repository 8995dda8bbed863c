import itertools
from collections import Counter
from fractions import Fraction

import pytest

from cvlab.distribution import (
    MultisetSpec, check_moments, draw_compositions, mean_closed, moment_oracle, pmf,
    sample_moments, second_abs_moment_closed, third_moment_closed,
)
from cvlab.exact import DomainError, GaussianRational, binomial, gsum

from conftest import random_gaussian


def subset_sums(spec, m):
    """Sums over raw index subsets of the expanded multiset (no grouping)."""
    flat = spec.expanded()
    return [gsum(c) for c in itertools.combinations(flat, m)]


def brute_moment(spec, m, f):
    sums = subset_sums(spec, m)
    total = f(sums[0]) * 0
    for v in sums:
        total = total + f(v)
    return total / len(sums)


def random_spec(rng, max_n=12):
    s = rng.randint(1, 4)
    values = []
    while len(values) < s:
        z = random_gaussian(rng, 3)
        if z not in values:
            values.append(z)
    mults = [rng.randint(1, 3) for _ in values]
    while sum(mults) > max_n:
        mults[mults.index(max(mults))] -= 1
    return MultisetSpec(tuple(values), tuple(mults))


ONE_TWO_THREE = MultisetSpec(("1", "2", "3"), (1, 1, 1))


def test_spec_validation():
    with pytest.raises(DomainError):
        MultisetSpec(("1", "1"), (1, 1))
    with pytest.raises(DomainError):
        MultisetSpec(("1",), (1, 2))
    assert MultisetSpec.from_pairs([("1", 1), ("1", 1), ("2", 1)]).mults == (2, 1)
    spec = MultisetSpec.from_json({"values": ["1", "2+1i"], "mults": [2, 1]})
    assert spec.to_json() == {"values": ["1", "2+1i"], "mults": [2, 1]}


@pytest.mark.parametrize("spec, m, expected", [
    (MultisetSpec(("1", "2"), (2, 1)), 2, {2: (1, Fraction(1, 3)), 3: (2, Fraction(2, 3))}),
    (MultisetSpec(("5",), (1,)), 1, {5: (1, Fraction(1))}),
    (ONE_TWO_THREE, 2, {3: (1, Fraction(1, 3)), 4: (1, Fraction(1, 3)), 5: (1, Fraction(1, 3))}),
])
def test_pmf_examples(spec, m, expected):
    law = pmf(spec, m)
    assert {v: e for v, e in law.entries.items()} == {GaussianRational(k): e for k, e in expected.items()}


def test_pmf_against_index_subsets(rng):
    for _ in range(60):
        spec = random_spec(rng, 18)
        m = rng.randint(1, spec.N)
        law = pmf(spec, m)
        counts = Counter(subset_sums(spec, m))
        assert {v: q for v, (q, _) in law.entries.items()} == dict(counts)
        assert sum(p for _, p in law.entries.values()) == 1
        assert sum(q for q, _ in law.entries.values()) == binomial(spec.N, m)


def test_oracle_examples():
    assert moment_oracle(ONE_TWO_THREE, 2, 1).value == 4
    assert moment_oracle(ONE_TWO_THREE, 2, 2, absolute=True).value == Fraction(50, 3)
    assert moment_oracle(ONE_TWO_THREE, 2, 3).value == 72


def test_oracle_rejects_odd_absolute_order():
    with pytest.raises(DomainError):
        moment_oracle(ONE_TWO_THREE, 2, 1, absolute=True)


def test_closed_form_examples():
    assert mean_closed(ONE_TWO_THREE, 2).value == 4
    assert mean_closed(MultisetSpec(("1", "i"), (1, 1)), 1).value == GaussianRational(Fraction(1, 2), Fraction(1, 2))
    assert second_abs_moment_closed(ONE_TWO_THREE, 2).value == Fraction(50, 3)
    assert second_abs_moment_closed(MultisetSpec(("1", "i"), (1, 1)), 2).value == 2
    assert third_moment_closed(ONE_TWO_THREE, 2).value == 72
    assert third_moment_closed(MultisetSpec(("1",), (2,)), 1).value == 1


def test_constant_multiset():
    z = GaussianRational(2, -1)
    for N in range(2, 6):
        spec = MultisetSpec((z,), (N,))
        assert mean_closed(spec, N).value == N * z
        assert second_abs_moment_closed(spec, N).value == N * N * z.abs_sq()
        assert third_moment_closed(spec, N).value == N ** 3 * z ** 3
        for m in range(1, N + 1):
            assert mean_closed(spec, m).value == m * z


def test_n_equal_one():
    spec = MultisetSpec(("3",), (1,))
    assert mean_closed(spec, 1).value == 3
    with pytest.raises(DomainError):
        second_abs_moment_closed(spec, 1)
    with pytest.raises(DomainError):
        third_moment_closed(spec, 1)


def test_closed_forms_against_raw_subsets(rng):
    for _ in range(80):
        spec = random_spec(rng)
        if spec.N < 2:
            continue
        for m in range(1, spec.N + 1):
            assert mean_closed(spec, m).value == brute_moment(spec, m, lambda v: v)
            assert second_abs_moment_closed(spec, m).value == brute_moment(spec, m, lambda v: v.abs_sq())
            assert third_moment_closed(spec, m).value == brute_moment(spec, m, lambda v: v ** 3)


def test_variance_nonnegative(rng):
    for _ in range(100):
        spec = random_spec(rng)
        if spec.N < 2:
            continue
        m = rng.randint(1, spec.N)
        assert second_abs_moment_closed(spec, m).value >= mean_closed(spec, m).value.abs_sq()


def test_check_moments_reports():
    reports = check_moments(ONE_TWO_THREE, 2)
    assert [r.identity_id for r in reports] == ["eq3", "eq4", "eq5"]
    assert all(r.holds for r in reports)


def test_draws_are_valid_subsets():
    spec = MultisetSpec(("1", "2", "5"), (3, 1, 2))
    counts = draw_compositions(spec, 4, 2000, seed=7)
    assert counts.shape == (2000, 3)
    assert (counts.sum(axis=1) == 4).all()
    assert (counts <= [3, 1, 2]).all()


def test_draw_frequencies_match_pmf():
    spec = MultisetSpec(("1", "2"), (2, 1))
    counts = draw_compositions(spec, 2, 30000, seed=3)
    frac_with_two = (counts[:, 1] == 1).mean()
    # P(X = 3) = 2/3; binomial std err ~ 0.0027
    assert abs(frac_with_two - 2 / 3) < 0.02


def test_sampler_reproducible_and_deterministic_case():
    a = sample_moments(ONE_TWO_THREE, 2, 500, seed=11)
    b = sample_moments(ONE_TWO_THREE, 2, 500, seed=11)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    c = sample_moments(ONE_TWO_THREE, 2, 500, seed=12)
    assert [r.value for r in a] != [r.value for r in c]
    z = GaussianRational(1, 1)
    det = sample_moments(MultisetSpec((z,), (4,)), 4, 50, seed=0)
    assert det[0].value == 4 * z and det[0].std_error == 0
    assert det[1].value == (4 * z).abs_sq()
    assert det[2].value == (4 * z) ** 3


def test_sampler_report_fields():
    rep = sample_moments(ONE_TWO_THREE, 2, 100, seed=1)[0].to_json()
    assert rep["method"] == "monte_carlo"
    assert rep["rng"] == "numpy.PCG64"
    assert rep["seed"] == 1 and rep["trials"] == 100
