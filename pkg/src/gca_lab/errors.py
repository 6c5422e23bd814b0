"""Exception hierarchy for gca-lab.

Validation failures subclass ValueError and internal theorem violations
subclass RuntimeError, so callers written against the builtin exceptions
keep working.
"""

from __future__ import annotations


class GcaLabError(Exception):
    """Base class for every error raised by gca-lab."""


class GroupError(GcaLabError, ValueError):
    """Malformed group data (non-Latin table, non-associative triple, bad element)."""


class HomomorphismError(GcaLabError, ValueError):
    """A map that is not a group homomorphism."""


class SubgroupError(GcaLabError, ValueError):
    """Element set that is not a subgroup, or lacks a required property."""


class ConfigurationError(GcaLabError, ValueError):
    """Configuration over the wrong group/alphabet, or malformed text."""


class RuleError(GcaLabError, ValueError):
    """Malformed local rule."""


class PreconditionError(GcaLabError, ValueError):
    """A documented precondition of an operation does not hold.

    Attributes:
        witness: Element or value showing the violation, if any.
    """

    def __init__(self, message: str, witness: object = None) -> None:
        super().__init__(message)
        self.witness = witness


class UnsupportedError(GcaLabError):
    """Backend combination outside the decidable scope."""


class InfiniteFamilyError(UnsupportedError):
    """Enumeration of an infinite homomorphism set without an entry bound."""


class NotFoundError(GcaLabError):
    """A finite search finished without a result."""


class NoCounterexampleError(GcaLabError):
    """No symmetric counterexample exists (the difference set is infinite)."""


class BudgetExceededError(GcaLabError):
    """An exhaustive enumeration would exceed the configured limit."""


class ConsistencyError(GcaLabError, RuntimeError):
    """An internally checked theorem failed. Always a bug.

    Attributes:
        counterexample: JSON-ready description of the failing instance.
    """

    def __init__(self, message: str, counterexample: dict | None = None) -> None:
        super().__init__(message)
        self.counterexample = counterexample or {}


class DefinitionError(GcaLabError, ValueError):
    """Workspace document failed to parse or validate.

    Attributes:
        path: Source file, if known.
        line: 1-based line of the offending entity, if known.
    """

    def __init__(self, message: str, path: str | None = None, line: int | None = None) -> None:
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(location + message)
        self.path = path
        self.line = line
