"""Report records shared by the identity, matrix and congruence checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import GaussianRational, format_exact

HOLDS = "holds"
FAILS = "fails"


def jsonable(value: Any) -> Any:
    """Exact values become strings; containers are converted recursively."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction, GaussianRational)):
        return format_exact(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, str):
        return value
    raise TypeError(f"cannot serialize {type(value).__name__}")


@dataclass
class IdentityReport:
    """Outcome of one checker run.

    ``lhs`` is always computed by summing over compositions, independently of
    ``rhs``.  ``checks`` holds auxiliary boolean conditions (integrality of a
    rational closed form, an independent cross-validation); the verdict is
    ``holds`` only if ``lhs == rhs`` and every auxiliary check passed.
    ``as_published`` carries the value of a known-misprinted closed form, for
    checkers whose ``note`` records the correction.
    """

    identity_id: str
    params: dict
    lhs: Any
    rhs: Any
    checks: dict = field(default_factory=dict)
    note: str | None = None
    as_published: Any = None
    extras: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs and all(self.checks.values())

    @property
    def verdict(self) -> str:
        return HOLDS if self.holds else FAILS

    def to_json(self) -> dict:
        out = {
            "kind": "identity",
            "id": self.identity_id,
            "params": jsonable(self.params),
            "lhs": jsonable(self.lhs),
            "rhs": jsonable(self.rhs),
            "verdict": self.verdict,
        }
        if self.checks:
            out["checks"] = dict(self.checks)
        if self.note:
            out["note"] = self.note
        if self.as_published is not None:
            out["as_published"] = jsonable(self.as_published)
            out["as_published_matches_lhs"] = self.as_published == self.lhs
        if self.extras:
            out["extras"] = jsonable(self.extras)
        return out
