"""Exceptions, plus the violation/check records returned by the validators.

Axiom failures discovered by a validator are data (``Violation`` lists),
not exceptions; exceptions are reserved for misuse of an operation or for
cross-checks that cannot fail on a validated model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class BookkeepingError(ValueError):
    """A partial operation was applied outside its domain of definition."""


class NoncommutativeGroupError(ValueError):
    """Refusal of an operation that is only sound for commutative groups."""


class FormPreconditionError(ValueError):
    """A form failed a required precondition; carries the failing instance."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class InconsistencyError(RuntimeError):
    """A cross-check that cannot fail on a validated model failed anyway."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class CeilingExceededError(RuntimeError):
    """An enumeration was refused because its size exceeds the ceiling."""

    def __init__(self, count: int, ceiling: int):
        super().__init__(
            f"enumeration would produce {count} results, over the ceiling of {ceiling}"
        )
        self.count = count
        self.ceiling = ceiling


class SchemaError(ValueError):
    """A document does not match its schema."""


class InvalidModelError(ValueError):
    """A structurally well-formed document whose axioms fail validation."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        first = self.violations[0].message if self.violations else "unknown"
        super().__init__(
            f"model fails validation ({len(self.violations)} violations; first: {first})"
        )


class GroupAxiomError(ValueError):
    """A multiplication table fails the group axioms."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        detail = "; ".join(v.message for v in self.violations)
        super().__init__(detail or "invalid group table")


@dataclass(frozen=True)
class Violation:
    """One axiom failure: the rule that broke and the witnessing names."""

    rule: str
    witnesses: tuple[str, ...]
    message: str

    def as_record(self) -> dict:
        return {
            "rule": self.rule,
            "witnesses": list(self.witnesses),
            "message": self.message,
        }


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a yes/no check, with a counterexample when it failed."""

    ok: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok
