"""Verification verdicts collected by the checking operations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .ratlin import Matrix


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None

    def as_dict(self) -> dict:
        d = {"name": self.name, "passed": bool(self.passed)}
        if self.witness is not None:
            d["witness"] = _plain(self.witness)
        return d


@dataclass
class VerificationReport:
    operation: str
    checks: list[Check] = field(default_factory=list)
    dims: dict[str, Any] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)

    def check(self, name: str, passed: bool, witness: Any = None) -> bool:
        self.checks.append(Check(name, bool(passed), None if passed else witness))
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> bool:
        for c in self.checks:
            if c.name == name:
                return c.passed
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "operation": self.operation,
            "dims": {k: _plain(v) for k, v in self.dims.items()},
            "checks": [c.as_dict() for c in self.checks],
        }


def _plain(v):
    from fractions import Fraction
    if isinstance(v, Matrix):
        return v.to_strings()
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (frozenset, set)):
        return sorted(_plain(x) for x in v)
    return v


def first_difference(a: Matrix, b: Matrix):
    """(row, col) of the first differing entry, or a shape note."""
    if a.shape != b.shape:
        return {"shapes": [list(a.shape), list(b.shape)]}
    for i in range(a.rows):
        for j in range(a.cols):
            if a[i, j] != b[i, j]:
                return {"entry": [i, j], "values": [str(a[i, j]), str(b[i, j])]}
    return None
