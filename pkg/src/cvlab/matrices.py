"""Exact matrices over Q(i) and the matrix-valued convolution identities.

The linear identity (eq28) follows from the scalar one entry by entry.  The
quadratic ones (eq29 with ``A^2``, eq30 with ``A A*``) are stated as
conjectures for non-commuting matrices; the checkers report a verdict rather
than assume one, and a failing report keeps the full witness in ``params``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .compositions import bounded_compositions, composition_weight, validate_caps
from .exact import DomainError, GaussianRational, binomial
from .reports import IdentityReport


class DimensionError(DomainError):
    """Matrix shapes are incompatible for the requested operation."""


class ExactMatrix:
    """Immutable ``rows x cols`` matrix of Gaussian rationals, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        entries = tuple(GaussianRational.coerce(e) for e in entries)
        if rows < 1 or cols < 1:
            raise DimensionError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionError("ragged or empty row list")
        return cls(len(rows), len(rows[0]), [e for r in rows for e in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [int(i == j) for i in range(n) for j in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "ExactMatrix":
        """Matrix unit E_ij (1-based) of order n."""
        return cls(n, n, [int((r, c) == (i - 1, j - 1)) for r in range(n) for c in range(n)])

    @classmethod
    def from_json(cls, obj: dict) -> "ExactMatrix":
        return cls(int(obj["rows"]), int(obj["cols"]), obj["entries"])

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": [str(e) for e in self.entries]}

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def tolist(self) -> list[list[GaussianRational]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def _same_shape(self, other: "ExactMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._same_shape(other)
        return ExactMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._same_shape(other)
        return ExactMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def scale(self, c) -> "ExactMatrix":
        c = GaussianRational.coerce(c)
        return ExactMatrix(self.rows, self.cols, [c * e for e in self.entries])

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            row = self.entries[i * self.cols:(i + 1) * self.cols]
            for j in range(other.cols):
                acc = GaussianRational(0)
                for t, a in enumerate(row):
                    if a:
                        acc = acc + a * other.entries[t * other.cols + j]
                out.append(acc)
        return ExactMatrix(self.rows, other.cols, out)

    def conj_transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows,
                           [self[i, j].conj() for j in range(self.cols) for i in range(self.rows)])

    @property
    def H(self) -> "ExactMatrix":
        return self.conj_transpose()

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"ExactMatrix.from_rows({[[str(e) for e in r] for r in self.tolist()]})"


def add(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a + b


def scale(c, a: ExactMatrix) -> ExactMatrix:
    return a.scale(c)


def mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a @ b


def conj_transpose(a: ExactMatrix) -> ExactMatrix:
    return a.conj_transpose()


def _prepare(caps, mats, m, square=False):
    caps = validate_caps(caps)
    mats = tuple(m_ if isinstance(m_, ExactMatrix) else ExactMatrix.from_json(m_) for m_ in mats)
    if len(mats) != len(caps):
        raise DomainError(f"expected {len(caps)} matrices, got {len(mats)}")
    shape = mats[0].shape
    if any(a.shape != shape for a in mats):
        raise DimensionError("all matrices must share one shape")
    if square and shape[0] != shape[1]:
        raise DimensionError("matrices must be square")
    N = sum(caps)
    if not 1 <= m <= N:
        raise DomainError(f"m must satisfy 1 <= m <= {N}, got {m}")
    return caps, mats, N, shape


def _combo(coeffs, mats, shape) -> ExactMatrix:
    acc = ExactMatrix.zeros(*shape)
    for c, a in zip(coeffs, mats):
        if c:
            acc = acc + a.scale(c)
    return acc


def _sum_over(caps, m, budget, shape, f) -> ExactMatrix:
    acc = ExactMatrix.zeros(*shape)
    for k in bounded_compositions(caps, m, budget):
        acc = acc + f(k).scale(composition_weight(k, caps))
    return acc


def _params(caps, mats, m):
    return {"caps": list(caps), "A": list(mats), "m": m}


def check_eq28(caps: Sequence[int], mats: Sequence, m: int, budget: int | None = None) -> IdentityReport:
    """sum weight * (sum k_i A_i) = C(N,m) (m/N) sum n_i A_i."""
    caps, mats, N, shape = _prepare(caps, mats, m)
    lhs = _sum_over(caps, m, budget, shape, lambda k: _combo(k, mats, shape))
    rhs = _combo(caps, mats, shape).scale(Fraction(binomial(N, m) * m, N))
    return IdentityReport("eq28", _params(caps, mats, m), lhs, rhs)


def check_eq29(caps: Sequence[int], mats: Sequence, m: int, budget: int | None = None) -> IdentityReport:
    """sum weight * (sum k_i A_i)^2 = C(N-2,m-1) sum n_i A_i^2 + C(N-2,m-2) (sum n_i A_i)^2."""
    caps, mats, N, shape = _prepare(caps, mats, m, square=True)
    if N < 2:
        raise DomainError("need N >= 2")

    def sq(k):
        s = _combo(k, mats, shape)
        return s @ s

    lhs = _sum_over(caps, m, budget, shape, sq)
    total = _combo(caps, mats, shape)
    rhs = (_combo(caps, [a @ a for a in mats], shape).scale(binomial(N - 2, m - 1))
           + (total @ total).scale(binomial(N - 2, m - 2)))
    return IdentityReport("eq29", _params(caps, mats, m), lhs, rhs)


def check_eq30(caps: Sequence[int], mats: Sequence, m: int, budget: int | None = None) -> IdentityReport:
    """Hermitian analogue: (sum k_i A_i)(sum k_i A_i*) on the left."""
    caps, mats, N, shape = _prepare(caps, mats, m)
    if N < 2:
        raise DomainError("need N >= 2")
    out_shape = (shape[0], shape[0])
    stars = [a.H for a in mats]

    def gram(k):
        return _combo(k, mats, shape) @ _combo(k, stars, shape[::-1])

    lhs = _sum_over(caps, m, budget, out_shape, gram)
    rhs = (_combo(caps, [a @ b for a, b in zip(mats, stars)], out_shape).scale(binomial(N - 2, m - 1))
           + (_combo(caps, mats, shape) @ _combo(caps, stars, shape[::-1])).scale(binomial(N - 2, m - 2)))
    return IdentityReport("eq30", _params(caps, mats, m), lhs, rhs)
