from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cvlab.exact import I, DomainError, GaussianRational, binomial, format_exact

from conftest import gaussian_rationals


@pytest.mark.parametrize("n, k, expected", [(5, 2, 10), (3, 5, 0), (0, 0, 1), (4, -1, 0), (7, 7, 1)])
def test_binomial_values(n, k, expected):
    assert binomial(n, k) == expected


def test_binomial_rejects_negative_upper_index():
    with pytest.raises(DomainError):
        binomial(-1, 0)


def test_pascal_recurrence():
    for n in range(1, 65):
        for k in range(0, n + 1):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


def test_absorption_identities():
    for n in range(1, 40):
        for m in range(1, n + 1):
            assert binomial(n, m) * m == n * binomial(n - 1, m - 1)
            if m >= 2:
                assert binomial(n, m) * m * (m - 1) == n * (n - 1) * binomial(n - 2, m - 2)


def test_gaussian_examples():
    assert I.abs_sq() == 1
    assert GaussianRational(1, 1) * GaussianRational(1, -1) == 2
    assert GaussianRational(2).pow3() == 8
    assert I.conj() == GaussianRational(0, -1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1) / GaussianRational(0)


@pytest.mark.parametrize("text, re, im", [
    ("1", 1, 0), ("0+1i", 0, 1), ("2/3-1/2i", Fraction(2, 3), Fraction(-1, 2)),
    ("i", 0, 1), ("-i", 0, -1), ("-3/4i", 0, Fraction(-3, 4)), ("-2+i", -2, 1), ("7/-1", None, None),
])
def test_parse(text, re, im):
    if re is None:
        with pytest.raises(ValueError):
            GaussianRational.parse(text)
    else:
        z = GaussianRational.parse(text)
        assert (z.re, z.im) == (re, im)


@pytest.mark.parametrize("bad", ["", "x", "1+", "1/0", "1+2", "2i3", "1.5"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        GaussianRational.parse(bad)


@given(gaussian_rationals())
def test_string_round_trip(z):
    assert GaussianRational.parse(str(z)) == z


@given(gaussian_rationals(), gaussian_rationals(), gaussian_rationals())
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if b:
        assert (a / b) * b == a


@given(gaussian_rationals(), gaussian_rationals())
def test_abs_sq_multiplicative(z, w):
    assert (z * w).abs_sq() == z.abs_sq() * w.abs_sq()
    assert z.abs_sq() >= 0
    assert z * z.conj() == z.abs_sq()


@given(gaussian_rationals(), st.integers(0, 6))
def test_pow_matches_repeated_product(z, e):
    expected = GaussianRational(1)
    for _ in range(e):
        expected = expected * z
    assert z ** e == expected


def test_mixed_arithmetic_and_hash():
    z = GaussianRational(Fraction(1, 2))
    assert z == Fraction(1, 2)
    assert hash(z) == hash(Fraction(1, 2))
    assert 1 - z == z
    assert Fraction(1, 2) * GaussianRational(0, 2) == I
    with pytest.raises(TypeError):
        GaussianRational(1) * 1.5


def test_format_exact():
    assert format_exact(10) == "10"
    assert format_exact(Fraction(50, 3)) == "50/3"
    assert format_exact(GaussianRational(4, 2)) == "4+2i"
    assert format_exact(GaussianRational(0, -1)) == "0-1i"
