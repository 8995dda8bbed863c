"""The subset-sum random variable X(m, Phi).

``Phi`` is a multiset of N Gaussian rationals, stored compressed as distinct
values ``z_i`` with multiplicities ``n_i``.  X is the sum of a uniformly
random m-element sub-multiset (drawn by index, without replacement).

Exact quantities are computed by enumerating bounded compositions of ``m``
over the multiplicities: choosing ``k_i`` copies of ``z_i`` happens in
``prod C(n_i, k_i)`` index subsets, all with the same sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .compositions import bounded_compositions, composition_weight, validate_caps
from .exact import DomainError, GaussianRational, binomial, format_exact, gsum
from .reports import IdentityReport

RNG_ALGORITHM = "numpy.PCG64"


@dataclass(frozen=True)
class MultisetSpec:
    values: tuple[GaussianRational, ...]
    mults: tuple[int, ...]

    def __post_init__(self):
        values = tuple(GaussianRational.coerce(v) for v in self.values)
        mults = validate_caps(self.mults)
        if len(values) != len(mults):
            raise DomainError("values and mults must have the same length")
        if len(set(values)) != len(values):
            raise DomainError("values must be pairwise distinct")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mults", mults)

    @classmethod
    def from_pairs(cls, pairs) -> "MultisetSpec":
        """Build from ``(value, multiplicity)`` pairs, merging repeated values."""
        merged: dict[GaussianRational, int] = {}
        for v, n in pairs:
            v = GaussianRational.coerce(v)
            merged[v] = merged.get(v, 0) + int(n)
        return cls(tuple(merged), tuple(merged.values()))

    @classmethod
    def from_json(cls, obj: dict) -> "MultisetSpec":
        return cls(tuple(obj["values"]), tuple(obj["mults"]))

    def to_json(self) -> dict:
        return {"values": [str(v) for v in self.values], "mults": list(self.mults)}

    @property
    def N(self) -> int:
        return sum(self.mults)

    def expanded(self) -> list[GaussianRational]:
        """The multiset as a flat list of N elements."""
        out = []
        for v, n in zip(self.values, self.mults):
            out.extend([v] * n)
        return out


def _check_m(spec: MultisetSpec, m: int) -> None:
    if not 1 <= m <= spec.N:
        raise DomainError(f"m must satisfy 1 <= m <= N={spec.N}, got {m}")


def composition_value(spec: MultisetSpec, k: Sequence[int]) -> GaussianRational:
    return gsum(ki * z for ki, z in zip(k, spec.values) if ki)


@dataclass
class Pmf:
    """Exact law of X: ``value -> (q, prob)`` with ``prob = q / C(N, m)``."""

    entries: dict[GaussianRational, tuple[int, Fraction]]
    total: int

    def prob(self, value) -> Fraction:
        entry = self.entries.get(GaussianRational.coerce(value))
        return entry[1] if entry else Fraction(0)

    def to_json(self) -> dict:
        return {
            "total": str(self.total),
            "entries": [
                {"value": str(v), "q": str(q), "prob": format_exact(p)}
                for v, (q, p) in self.entries.items()
            ],
        }


def pmf(spec: MultisetSpec, m: int, budget: int | None = None) -> Pmf:
    _check_m(spec, m)
    counts: dict[GaussianRational, int] = {}
    for k in bounded_compositions(spec.mults, m, budget):
        v = composition_value(spec, k)
        counts[v] = counts.get(v, 0) + composition_weight(k, spec.mults)
    total = binomial(spec.N, m)
    entries = {v: (q, Fraction(q, total)) for v, q in counts.items()}
    return Pmf(entries, total)


@dataclass
class MomentReport:
    order: int
    absolute: bool
    value: object  # Fraction when absolute, else GaussianRational
    method: str  # "oracle" | "closed_form" | "monte_carlo"
    trials: int | None = None
    seed: int | None = None
    std_error: float | None = None
    extras: dict = field(default_factory=dict)

    def label(self) -> str:
        return f"E[|X|^{self.order}]" if self.absolute else f"E[X^{self.order}]"

    def to_json(self) -> dict:
        out = {
            "kind": "moment",
            "moment": self.label(),
            "order": self.order,
            "absolute": self.absolute,
            "value": format_exact(self.value),
            "method": self.method,
        }
        if self.method == "monte_carlo":
            out["trials"] = self.trials
            out["seed"] = self.seed
            out["std_error"] = self.std_error
            out["estimate_float"] = _as_float_str(self.value)
        out.update(self.extras)
        return out


def _as_float_str(x) -> str:
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return repr(float(x.re))
        return f"{float(x.re)!r}{float(x.im):+}i"
    return repr(float(x))


def _power_value(v: GaussianRational, order: int, absolute: bool):
    if absolute:
        return v.abs_sq() ** (order // 2)
    return v ** order


def moment_oracle(spec: MultisetSpec, m: int, order: int, absolute: bool = False,
                  budget: int | None = None) -> MomentReport:
    """Exact moment by direct averaging over all m-subsets (grouped by composition).

    Absolute moments are restricted to even orders, where ``|X|^order`` is a
    power of ``|X|^2`` and stays rational.
    """
    _check_m(spec, m)
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    if absolute and order % 2:
        raise DomainError("absolute moments are exact only for even orders")
    total = Fraction(0) if absolute else GaussianRational(0)
    for k in bounded_compositions(spec.mults, m, budget):
        w = composition_weight(k, spec.mults)
        total = total + w * _power_value(composition_value(spec, k), order, absolute)
    value = total / binomial(spec.N, m)
    return MomentReport(order, absolute, value, "oracle")


def _power_sums(spec: MultisetSpec, e: int) -> GaussianRational:
    return gsum(n * z ** e for z, n in zip(spec.values, spec.mults))


def mean_closed(spec: MultisetSpec, m: int) -> MomentReport:
    """E[X] = (m/N) * sum of all elements.  Defined for N >= 1."""
    _check_m(spec, m)
    value = _power_sums(spec, 1) * Fraction(m, spec.N)
    return MomentReport(1, False, value, "closed_form")


def _require_two(spec: MultisetSpec) -> None:
    if spec.N < 2:
        raise DomainError("closed forms for higher moments need N >= 2")


def second_abs_moment_closed(spec: MultisetSpec, m: int) -> MomentReport:
    """E[|X|^2] = m/(N(N-1)) * ((N-m) sum|z|^2 + (m-1) |sum z|^2)."""
    _check_m(spec, m)
    _require_two(spec)
    N = spec.N
    sum_abs_sq = sum((n * z.abs_sq() for z, n in zip(spec.values, spec.mults)), Fraction(0))
    abs_sq_sum = _power_sums(spec, 1).abs_sq()
    value = Fraction(m, N * (N - 1)) * ((N - m) * sum_abs_sq + (m - 1) * abs_sq_sum)
    return MomentReport(2, True, value, "closed_form")


NOTE_THIRD_MOMENT = (
    "erratum: published E[X^3] = m/(N(N-1)) ((N+2-3m) p3 + 3(m-1) p2 p1) omits the "
    "triple-product term and is exact only for m <= 2; the subset oracle confirms "
    "m/N p3 + 3m(m-1)/(N(N-1)) (p1 p2 - p3) + m(m-1)(m-2)/(N(N-1)(N-2)) (p1^3 - 3 p1 p2 + 2 p3)"
)


def third_moment_terms(values, mults):
    """Power sums p1, p2, p3 of a compressed multiset."""
    return tuple(gsum(n * z ** e for z, n in zip(values, mults)) for e in (1, 2, 3))


def third_moment_exact(N: int, m: int, p1, p2, p3) -> GaussianRational:
    """E[X^3] from power sums.

    Expanding (sum over S)^3 gives one term per distinct index, 3 per ordered
    pair and 6 per unordered triple; these occur in C(N-1,m-1), C(N-2,m-2)
    and C(N-3,m-3) of the C(N,m) subsets respectively.
    """
    value = p3 * Fraction(m, N) + (p1 * p2 - p3) * Fraction(3 * m * (m - 1), N * (N - 1))
    if m >= 3:
        triple = p1 ** 3 - p1 * p2 * 3 + p3 * 2
        value = value + triple * Fraction(m * (m - 1) * (m - 2), N * (N - 1) * (N - 2))
    return value


def third_moment_published(N: int, m: int, p1, p2, p3) -> GaussianRational:
    """The widely quoted form m/(N(N-1)) ((N+2-3m) p3 + 3(m-1) p2 p1); wrong for m >= 3."""
    return (p3 * (N + 2 - 3 * m) + p2 * p1 * (3 * (m - 1))) * Fraction(m, N * (N - 1))


def third_moment_closed(spec: MultisetSpec, m: int) -> MomentReport:
    """E[X^3] in closed form; valid for complex entries as well as real ones.

    ``extras["as_published"]`` holds the misprinted two-term form, which
    agrees only when m <= 2.
    """
    _check_m(spec, m)
    _require_two(spec)
    p1, p2, p3 = third_moment_terms(spec.values, spec.mults)
    value = third_moment_exact(spec.N, m, p1, p2, p3)
    published = third_moment_published(spec.N, m, p1, p2, p3)
    return MomentReport(3, False, value, "closed_form",
                        extras={"as_published": str(published), "note": NOTE_THIRD_MOMENT})


def draw_compositions(spec: MultisetSpec, m: int, trials: int, seed: int) -> np.ndarray:
    """Draw ``trials`` uniform m-subsets of indices; return per-draw counts per value.

    Each draw is a partial Fisher-Yates shuffle of the index array 0..N-1
    (only the first m positions are fixed).  The draws are vectorised across
    trials: step j swaps position j with a uniform position in [j, N).
    Result has shape ``(trials, s)``.
    """
    _check_m(spec, m)
    if trials < 1:
        raise DomainError("trials must be >= 1")
    N = spec.N
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = np.tile(np.arange(N, dtype=np.int64), (trials, 1))
    rows = np.arange(trials)
    for j in range(m):
        r = rng.integers(j, N, size=trials)
        picked = idx[rows, r].copy()
        idx[rows, r] = idx[rows, j]
        idx[rows, j] = picked
    owner = np.repeat(np.arange(len(spec.mults)), spec.mults)
    chosen = owner[idx[:, :m]]
    counts = np.zeros((trials, len(spec.mults)), dtype=np.int64)
    for col in range(m):
        np.add.at(counts, (rows, chosen[:, col]), 1)
    return counts


def _std_error_complex(values: dict, freq: dict, trials: int, mean) -> float:
    if trials < 2:
        return 0.0
    ss = 0.0
    for key, c in freq.items():
        d = values[key] - mean
        if isinstance(d, GaussianRational):
            ss += c * float(d.abs_sq())
        else:
            ss += c * float(d) ** 2
    return math.sqrt(ss / (trials - 1) / trials)


def sample_moments(spec: MultisetSpec, m: int, trials: int, seed: int) -> list[MomentReport]:
    """Monte-Carlo estimates of E[X], E[|X|^2] and E[X^3] with standard errors.

    Estimates are exact rationals (the sample average of exact values); only
    the standard errors are floats.  Fixed ``seed`` reproduces every bit.
    """
    counts = draw_compositions(spec, m, trials, seed)
    uniq, freq_arr = np.unique(counts, axis=0, return_counts=True)
    freq = {tuple(int(x) for x in row): int(c) for row, c in zip(uniq, freq_arr)}
    sums = {k: composition_value(spec, k) for k in freq}

    def estimate(f):
        vals = {k: f(v) for k, v in sums.items()}
        start = Fraction(0) if all(isinstance(x, Fraction) for x in vals.values()) else GaussianRational(0)
        total = start
        for k, c in freq.items():
            total = total + c * vals[k]
        mean = total / trials
        return mean, _std_error_complex(vals, freq, trials, mean)

    extras = {"rng": RNG_ALGORITHM, "split_policy": "single stream"}
    reports = []
    for order, absolute, f in (
        (1, False, lambda v: v),
        (2, True, lambda v: v.abs_sq()),
        (3, False, lambda v: v ** 3),
    ):
        mean, se = estimate(f)
        reports.append(MomentReport(order, absolute, mean, "monte_carlo", trials, seed, se,
                                    dict(extras)))
    return reports


def check_moments(spec: MultisetSpec, m: int, budget: int | None = None):
    """Oracle vs closed form for E[X], E[|X|^2], E[X^3] as identity reports.

    The second and third moments are skipped when N = 1.
    """
    params = {**spec.to_json(), "m": m}
    pairs = [("eq3", moment_oracle(spec, m, 1, budget=budget), mean_closed(spec, m))]
    if spec.N >= 2:
        pairs.append(("eq4", moment_oracle(spec, m, 2, True, budget), second_abs_moment_closed(spec, m)))
        pairs.append(("eq5", moment_oracle(spec, m, 3, budget=budget), third_moment_closed(spec, m)))
    reports = [IdentityReport(ident, dict(params), oracle.value, closed.value)
               for ident, oracle, closed in pairs]
    for rep in reports[2:]:
        p1, p2, p3 = third_moment_terms(spec.values, spec.mults)
        rep.note = NOTE_THIRD_MOMENT
        rep.as_published = third_moment_published(spec.N, m, p1, p2, p3)
    return reports
