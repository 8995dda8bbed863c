"""Exact scalars: binomials, rationals and Gaussian rationals.

Integers are plain Python ints and rationals are :class:`fractions.Fraction`
(always in lowest terms with a positive denominator).  The only new type is
:class:`GaussianRational`, an element of Q(i).
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational


class DomainError(ValueError):
    """Argument outside the domain an operation is defined on."""


def binomial(n: int, k: int) -> int:
    """C(n, k) with the vanishing convention C(n, k) = 0 for k < 0 or k > n.

    >>> binomial(5, 2), binomial(3, 5), binomial(0, 0)
    (10, 0, 1)
    """
    if n < 0:
        raise DomainError(f"binomial upper index must be >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_fraction(q: Fraction) -> str:
    """``"num/den"``, or just ``"num"`` when the denominator is 1."""
    return str(q)


_NUMBER_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def _parse_number(text: str, original: str) -> Fraction:
    if not _NUMBER_RE.match(text):
        raise ValueError(f"not a Gaussian rational: {original!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {original!r}") from None


class GaussianRational:
    """Complex number ``re + im*i`` with rational parts.

    Instances are immutable and hashable.  Arithmetic accepts ints and
    Fractions on either side.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_fraction(re))
        object.__setattr__(self, "im", as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # construction / serialization

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls(as_fraction(x), 0)

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``a/b+c/di`` with optional parts: ``"1"``, ``"0+1i"``,
        ``"2/3-1/2i"``, ``"i"``, ``"-3i"``."""
        body = text.strip().replace(" ", "")
        if not body.endswith("i"):
            return cls(_parse_number(body, text), 0)
        body = body[:-1]
        split = max(body.rfind("+"), body.rfind("-"))
        if split > 0:
            re_text, im_text = body[:split], body[split:]
        else:
            re_text, im_text = None, body
        if im_text in ("", "+", "-"):
            im_text += "1"
        re_val = _parse_number(re_text, text) if re_text is not None else Fraction(0)
        return cls(re_val, _parse_number(im_text, text))

    def __str__(self) -> str:
        if self.im == 0:
            return format_fraction(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{format_fraction(self.re)}{sign}{format_fraction(abs(self.im))}i"

    def __repr__(self) -> str:
        return f"GaussianRational('{self}')"

    # field operations

    def __add__(self, other):
        try:
            w = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + w.re, self.im + w.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            w = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - w.re, self.im - w.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        try:
            w = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * w.re - self.im * w.im,
                                self.re * w.im + self.im * w.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            w = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        d = w.abs_sq()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * w.re + self.im * w.im) / d,
            (self.im * w.re - self.re * w.im) / d,
        )

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = GaussianRational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def pow3(self) -> "GaussianRational":
        return self * self * self

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def gsum(values) -> GaussianRational:
    """Sum of Gaussian rationals (or anything they coerce from)."""
    re = Fraction(0)
    im = Fraction(0)
    for v in values:
        v = GaussianRational.coerce(v)
        re += v.re
        im += v.im
    return GaussianRational(re, im)


def format_exact(x) -> str:
    """Exact value as a string: ints in decimal, rationals ``num/den``,
    Gaussian rationals ``re+imi``."""
    if isinstance(x, bool):
        raise TypeError("bool is not an exact numeric value")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, GaussianRational):
        return str(x)
    raise TypeError(f"no exact string form for {type(x).__name__}")
