"""Exact checkers for the scalar Chu-Vandermonde-type identities.

Every checker computes its left-hand side by brute-force summation (over
bounded compositions, or an explicit index range for the two- and
three-part forms) and its right-hand side from the closed form, then
compares them exactly.

Several closed forms circulate with a misprinted factor.  For those the
checker uses the corrected form (confirmed by the summation oracle), fills
``note`` with the correction, and evaluates the misprinted variant into
``as_published`` so regressions can assert that it really is wrong.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .compositions import validate_caps, weighted_sum
from .distribution import third_moment_exact, third_moment_terms
from .exact import DomainError, GaussianRational, binomial, gsum
from .reports import IdentityReport

NOTE_FACTOR_M = "erratum: published right-hand side carries factor 2m; the summation oracle confirms factor m"
NOTE_CUBIC = ("erratum: published right-hand side omits the factor C(N,m) and, for m >= 3, "
              "the triple-product term m(m-1)(m-2)/(N(N-1)(N-2)) (p1^3 - 3 p1 p2 + 2 p3); "
              "the summation oracle confirms both")


def _as_values(z: Sequence, s: int) -> tuple[GaussianRational, ...]:
    values = tuple(GaussianRational.coerce(v) for v in z)
    if len(values) != s:
        raise DomainError(f"expected {s} values, got {len(values)}")
    return values


def _check_m_range(m: int, lo: int, hi: int) -> None:
    if not lo <= m <= hi:
        raise DomainError(f"m must satisfy {lo} <= m <= {hi}, got {m}")


def _linear(values):
    return lambda k: gsum(ki * z for ki, z in zip(k, values) if ki)


def check_eq8(caps: Sequence[int], z: Sequence, m: int, budget: int | None = None) -> IdentityReport:
    """sum_k prod C(n_i,k_i) * (sum k_i z_i) = C(N,m) * m * (sum n_i z_i) / N."""
    caps = validate_caps(caps)
    values = _as_values(z, len(caps))
    N = sum(caps)
    _check_m_range(m, 1, N)
    lhs = weighted_sum(caps, m, _linear(values), budget, start=GaussianRational(0))
    rhs = gsum(n * v for n, v in zip(caps, values)) * Fraction(binomial(N, m) * m, N)
    return IdentityReport("eq8", {"caps": list(caps), "z": list(values), "m": m}, lhs, rhs)


def check_eq12(caps: Sequence[int], m: int, budget: int | None = None) -> IdentityReport:
    caps = validate_caps(caps)
    N = sum(caps)
    _check_m_range(m, 1, N)
    lhs = weighted_sum(caps, m, lambda k: 1, budget)
    return IdentityReport("eq12", {"caps": list(caps), "m": m}, lhs, binomial(N, m))


def check_eq13(a: int, b: int, m: int) -> IdentityReport:
    """Classical Chu-Vandermonde: sum_k C(a,k) C(b,m-k) = C(a+b,m)."""
    if a < 0 or b < 0 or m < 0:
        raise DomainError("a, b, m must be nonnegative")
    lhs = sum(binomial(a, k) * binomial(b, m - k) for k in range(m + 1))
    return IdentityReport("eq13", {"a": a, "b": b, "m": m}, lhs, binomial(a + b, m))


def check_eq14(n1: int, n2: int, z, m: int) -> IdentityReport:
    """Two-part specialisation with ratio z: weight * (k z + (m - k))."""
    if n1 < 1 or n2 < 1:
        raise DomainError("n1, n2 must be positive")
    _check_m_range(m, 1, n1 + n2)
    z = GaussianRational.coerce(z)
    lhs = gsum(binomial(n1, k) * binomial(n2, m - k) * (k * z + (m - k)) for k in range(m + 1))
    base = (n1 * z + n2) * Fraction(binomial(n1 + n2, m), n1 + n2)
    return IdentityReport("eq14", {"n1": n1, "n2": n2, "z": z, "m": m}, lhs, base * m,
                          note=NOTE_FACTOR_M, as_published=base * (2 * m))


def _three_part_sum(n1: int, n2: int, n3: int, m: int, f):
    total = GaussianRational(0)
    for k1 in range(m + 1):
        for k2 in range(m - k1 + 1):
            w = binomial(n1, k1) * binomial(n2, k2) * binomial(n3, m - k1 - k2)
            if w:
                total = total + w * f(k1, k2)
    return total


def _check_three(n1, n2, n3, m):
    if min(n1, n2, n3) < 1:
        raise DomainError("n1, n2, n3 must be positive")
    _check_m_range(m, 1, n1 + n2 + n3)


def check_eq15(n1: int, n2: int, n3: int, z, w, m: int) -> IdentityReport:
    """Three-part specialisation with ratios z and w."""
    _check_three(n1, n2, n3, m)
    z, w = GaussianRational.coerce(z), GaussianRational.coerce(w)
    N = n1 + n2 + n3
    lhs = _three_part_sum(n1, n2, n3, m, lambda k1, k2: k1 * z + k2 * w + (m - k1 - k2))
    base = (n1 * z + n2 * w + n3) * Fraction(binomial(N, m), N)
    return IdentityReport("eq15", {"n1": n1, "n2": n2, "n3": n3, "z": z, "w": w, "m": m},
                          lhs, base * m, note=NOTE_FACTOR_M, as_published=base * (2 * m))


def check_eq16(n1: int, n2: int, n3: int, m: int) -> IdentityReport:
    """The z = w = 1/2 case of eq15, doubled to clear denominators."""
    _check_three(n1, n2, n3, m)
    N = n1 + n2 + n3
    lhs = _three_part_sum(n1, n2, n3, m, lambda k1, k2: 2 * m - k1 - k2)
    base = Fraction((n1 + n2 + 2 * n3) * binomial(N, m), N)
    return IdentityReport("eq16", {"n1": n1, "n2": n2, "n3": n3, "m": m},
                          lhs, GaussianRational(base * m), note=NOTE_FACTOR_M,
                          as_published=GaussianRational(base * 2 * m))


def check_eq15_16(n1: int, n2: int, n3: int, z, w, m: int) -> tuple[IdentityReport, IdentityReport]:
    return check_eq15(n1, n2, n3, z, w, m), check_eq16(n1, n2, n3, m)


def check_eq17(s: int, l: int, m: int, budget: int | None = None) -> IdentityReport:
    """z_i = i with equal caps l: sum weight * sum(i k_i) = m (s+1)/2 * C(sl, m)."""
    if s < 1 or l < 1:
        raise DomainError("s, l must be positive")
    _check_m_range(m, 1, s * l)
    caps = (l,) * s
    lhs = weighted_sum(caps, m, lambda k: sum((i + 1) * ki for i, ki in enumerate(k)), budget)
    rhs = Fraction(m * (s + 1), 2) * binomial(s * l, m)
    return IdentityReport("eq17", {"s": s, "l": l, "m": m}, lhs, rhs,
                          checks={"rhs_integral": rhs.denominator == 1})


def popcount_sum(s: int, m: int) -> int:
    """Sum of the integers in [0, 2^s) with exactly m one-bits."""
    return sum(x for x in range(1 << s) if bin(x).count("1") == m)


def check_eq21(n: int, s: int, m: int, budget: int | None = None) -> IdentityReport:
    """Base-n digits: caps n-1, z_i = n^(i-1); RHS (n^s - 1) C(s(n-1)-1, m-1).

    For n = 2 the left side is also checked against a popcount enumeration.
    """
    if n < 2 or s < 1:
        raise DomainError("need n >= 2 and s >= 1")
    _check_m_range(m, 1, s * (n - 1))
    caps = (n - 1,) * s
    lhs = weighted_sum(caps, m, lambda k: sum(ki * n ** i for i, ki in enumerate(k)), budget)
    rhs = (n ** s - 1) * binomial(s * (n - 1) - 1, m - 1)
    report = IdentityReport("eq21", {"n": n, "s": s, "m": m}, lhs, rhs)
    if n == 2:
        bits = popcount_sum(s, m)
        report.extras["popcount_sum"] = bits
        report.checks["popcount_matches"] = bits == lhs
    return report


def check_corollary_binary(s: int, m: int) -> IdentityReport:
    """Sum of integers below 2^s with exactly m ones equals (2^s - 1) C(s-1, m-1)."""
    if s < 1 or not 0 <= m <= s:
        raise DomainError("need s >= 1 and 0 <= m <= s")
    return IdentityReport("corollary_binary", {"s": s, "m": m}, popcount_sum(s, m),
                          ((1 << s) - 1) * binomial(s - 1, m - 1))


def check_eq22(caps: Sequence[int], z: Sequence, m: int, budget: int | None = None) -> IdentityReport:
    """Quadratic analogue: weight * |sum k_i z_i|^2, for 2 <= m <= N."""
    caps = validate_caps(caps)
    values = _as_values(z, len(caps))
    N = sum(caps)
    _check_m_range(m, 2, N)
    lin = _linear(values)
    lhs = weighted_sum(caps, m, lambda k: lin(k).abs_sq(), budget, start=Fraction(0))
    sum_abs_sq = sum((n * v.abs_sq() for n, v in zip(caps, values)), Fraction(0))
    abs_sq_sum = gsum(n * v for n, v in zip(caps, values)).abs_sq()
    rhs = binomial(N - 2, m - 1) * sum_abs_sq + binomial(N - 2, m - 2) * abs_sq_sum
    return IdentityReport("eq22", {"caps": list(caps), "z": list(values), "m": m}, lhs, rhs)


def eq26_rhs(s: int, l: int, m: int) -> Fraction:
    num = m * (s + 1) * (3 * s * s * l * m + 3 * s * l * m + s * s * l - 4 * s * m - s * l - 2 * m)
    return Fraction(num, 12 * (s * l - 1)) * binomial(s * l, m)


def check_eq26(s: int, l: int, m: int, budget: int | None = None) -> IdentityReport:
    """z_i = i with equal caps l, squared: closed form must collapse to an integer."""
    if s < 1 or l < 1:
        raise DomainError("s, l must be positive")
    if s * l < 2:
        raise DomainError("need s*l >= 2 (closed form divides by s*l - 1)")
    _check_m_range(m, 2, s * l)
    caps = (l,) * s
    lhs = weighted_sum(caps, m, lambda k: sum((i + 1) * ki for i, ki in enumerate(k)) ** 2, budget)
    rhs = eq26_rhs(s, l, m)
    return IdentityReport("eq26", {"s": s, "l": l, "m": m}, lhs, rhs,
                          checks={"rhs_integral": rhs.denominator == 1})


def check_eq27(caps: Sequence[int], z: Sequence, m: int, budget: int | None = None) -> IdentityReport:
    """Cubic analogue: sum weight * (sum k_i z_i)^3 = C(N,m) E[X^3].  Valid for complex z.

    The published right-hand side is the two-term bracket without C(N,m);
    multiplying it by C(N,m) repairs m <= 2 only, because the bracket also
    lacks the triple-product term.  Both variants are kept for comparison:
    ``as_published`` (bare bracket) and ``extras["bracket_times_binomial"]``.
    """
    caps = validate_caps(caps)
    values = _as_values(z, len(caps))
    N = sum(caps)
    if N < 2:
        raise DomainError("need N >= 2")
    _check_m_range(m, 1, N)
    lin = _linear(values)
    lhs = weighted_sum(caps, m, lambda k: lin(k) ** 3, budget, start=GaussianRational(0))
    p1, p2, p3 = third_moment_terms(values, caps)
    total = binomial(N, m)
    bracket = eq27_bracket(N, m, p1, p2, p3)
    report = IdentityReport("eq27", {"caps": list(caps), "z": list(values), "m": m},
                            lhs, third_moment_exact(N, m, p1, p2, p3) * total,
                            note=NOTE_CUBIC, as_published=bracket)
    report.extras["bracket_times_binomial"] = bracket * total
    return report


def eq27_bracket(N: int, m: int, p1, p2, p3) -> GaussianRational:
    """(m(N-m) - 2m(m-1))/(N(N-1)) p3 + 3m(m-1)/(N(N-1)) p2 p1, as published."""
    d = N * (N - 1)
    return p3 * Fraction(m * (N - m) - 2 * m * (m - 1), d) + p2 * p1 * Fraction(3 * m * (m - 1), d)


def check_remark22(k1: int, k2: int, n: int) -> IdentityReport:
    """sum_v C(k1+v-1, v) C(k2+n-v-1, n-v) = C(k1+k2+n-1, n)."""
    if k1 < 1 or k2 < 1 or n < 0:
        raise DomainError("need k1, k2 >= 1 and n >= 0")
    lhs = sum(binomial(k1 + v - 1, v) * binomial(k2 + n - v - 1, n - v) for v in range(n + 1))
    return IdentityReport("remark22", {"k1": k1, "k2": k2, "n": n}, lhs,
                          binomial(k1 + k2 + n - 1, n))
