"""Exact arithmetic toolkit for Chu-Vandermonde-type convolution identities,
moments of random subset sums, and Wolstenholme-type congruences."""

from .compositions import BudgetExceeded, bounded_compositions, composition_weight, count_compositions
from .exact import DomainError, GaussianRational, binomial
from .reports import IdentityReport

__all__ = [
    "BudgetExceeded",
    "DomainError",
    "GaussianRational",
    "IdentityReport",
    "binomial",
    "bounded_compositions",
    "composition_weight",
    "count_compositions",
]
__version__ = "0.1.0"
