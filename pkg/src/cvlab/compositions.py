"""Bounded compositions and binomial-weighted sums over them.

A bounded composition of ``m`` with caps ``(n_1, ..., n_s)`` is a tuple
``(k_1, ..., k_s)`` of nonnegative integers with ``sum(k) == m`` and
``k_i <= n_i``.  Every convolution sum in this package ranges over these
tuples, each weighted by ``C(n_1, k_1) * ... * C(n_s, k_s)``.
"""
from __future__ import annotations

import os
from typing import Callable, Iterator, Sequence

from .exact import DomainError, binomial

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "CVLAB_BUDGET"


class BudgetExceeded(RuntimeError):
    """Enumeration would visit more compositions than the budget allows."""

    def __init__(self, needed: int, budget: int):
        super().__init__(f"{needed} compositions exceed the enumeration budget {budget}")
        self.needed = needed
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        return int(raw)
    return DEFAULT_BUDGET


def validate_caps(caps: Sequence[int]) -> tuple[int, ...]:
    caps = tuple(int(n) for n in caps)
    if not caps:
        raise DomainError("caps must contain at least one entry")
    if any(n < 1 for n in caps):
        raise DomainError(f"caps must be positive integers, got {caps}")
    return caps


def num_compositions(caps: Sequence[int], m: int) -> int:
    """Number of bounded compositions (unweighted), by dynamic programming."""
    caps = validate_caps(caps)
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    ways = [1] + [0] * m
    for n in caps:
        nxt = [0] * (m + 1)
        # sliding window sum of ways[t - n .. t]
        window = 0
        for t in range(m + 1):
            window += ways[t]
            if t - n - 1 >= 0:
                window -= ways[t - n - 1]
            nxt[t] = window
        ways = nxt
    return ways[m]


def check_budget(caps: Sequence[int], m: int, budget: int | None = None) -> int:
    """Raise :class:`BudgetExceeded` unless the enumeration fits; return its size."""
    if budget is None:
        budget = default_budget()
    needed = num_compositions(caps, m)
    if needed > budget:
        raise BudgetExceeded(needed, budget)
    return needed


def bounded_compositions(caps: Sequence[int], m: int,
                         budget: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every bounded composition of ``m`` exactly once.

    Order is lexicographically decreasing in ``(k_1, ..., k_s)``: for caps
    ``(1, 1, 1)`` and ``m = 2`` this gives ``(1,1,0), (1,0,1), (0,1,1)``.
    The walk is an odometer over a single state vector, so memory is O(s).
    """
    caps = validate_caps(caps)
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    s = len(caps)
    if m > sum(caps):
        return
    check_budget(caps, m, budget)

    # tail[i] = capacity of positions i+1 .. s-1
    tail = [0] * s
    for i in range(s - 2, -1, -1):
        tail[i] = tail[i + 1] + caps[i + 1]

    k = [0] * s

    def fill(start: int, rem: int) -> None:
        for j in range(start, s):
            k[j] = min(caps[j], rem)
            rem -= k[j]

    fill(0, m)
    while True:
        yield tuple(k)
        # rightmost position (not the last) that can give one unit to its suffix
        rest = k[s - 1]
        i = s - 2
        while i >= 0:
            if k[i] > 0 and rest + 1 <= tail[i]:
                break
            rest += k[i]
            i -= 1
        if i < 0:
            return
        k[i] -= 1
        fill(i + 1, rest + 1)


def composition_weight(k: Sequence[int], caps: Sequence[int]) -> int:
    """Product of C(n_i, k_i)."""
    w = 1
    for ki, ni in zip(k, caps):
        w *= binomial(ni, ki)
    return w


def weighted_sum(caps: Sequence[int], m: int, f: Callable[[tuple[int, ...]], object],
                 budget: int | None = None, start=0):
    """Sum of ``composition_weight(k) * f(k)`` over all bounded compositions."""
    total = start
    for k in bounded_compositions(caps, m, budget):
        total = total + composition_weight(k, caps) * f(k)
    return total


def count_compositions(caps: Sequence[int], m: int, budget: int | None = None) -> int:
    """Weighted count; equals C(sum(caps), m) by the multinomial Vandermonde identity."""
    total = 0
    for k in bounded_compositions(caps, m, budget):
        total += composition_weight(k, caps)
    return total


def weighted_linear_sum(caps: Sequence[int], m: int, j: int,
                        budget: int | None = None) -> int:
    """Sum of ``weight * k_j`` (``j`` is 1-based); equals n_j * C(N-1, m-1)."""
    caps = validate_caps(caps)
    if not 1 <= j <= len(caps):
        raise DomainError(f"index j must be in 1..{len(caps)}, got {j}")
    return weighted_sum(caps, m, lambda k: k[j - 1], budget)


def weighted_quadratic_sum(caps: Sequence[int], m: int, i: int, j: int,
                           budget: int | None = None) -> int:
    """Sum of ``weight * k_i * k_j`` (1-based indices)."""
    caps = validate_caps(caps)
    for idx in (i, j):
        if not 1 <= idx <= len(caps):
            raise DomainError(f"index must be in 1..{len(caps)}, got {idx}")
    return weighted_sum(caps, m, lambda k: k[i - 1] * k[j - 1], budget)
