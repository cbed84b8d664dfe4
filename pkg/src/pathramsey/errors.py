"""Exception types shared across the package."""

from __future__ import annotations


class PathRamseyError(Exception):
    """Base class for all package errors."""


class GraphFormatError(PathRamseyError):
    """Malformed edge-list text or inconsistent graph data."""


class ParameterError(PathRamseyError):
    """A parameter violates a documented precondition (domain error)."""


class ParameterInfeasibleError(ParameterError):
    """Derived parameters leave the feasible range (e.g. edge probability > 1)."""


class CertificationError(PathRamseyError):
    """Density certification failed after exhausting the retry budget."""

    def __init__(self, message: str, worst_pair=None):
        super().__init__(message)
        self.worst_pair = worst_pair


class NoCoverFoundError(PathRamseyError):
    """The two-coloured cover search gave up (honest failure, never a wrong cover)."""


class NoPathFoundError(PathRamseyError):
    """Constrained path search exhausted; carries the longest path achieved."""

    def __init__(self, message: str, longest=None):
        super().__init__(message)
        self.longest = longest


class BudgetExceededError(PathRamseyError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class PreconditionError(PathRamseyError):
    """A checked precondition on input structure failed."""


class ConstructionError(PathRamseyError):
    """An internal construction step that should be impossible to break, broke."""


class LLLFailureError(PathRamseyError):
    """Resampling budget exhausted; carries per-event violation statistics."""

    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats


class BaseCaseError(PathRamseyError):
    """Base-case driver could not supply a long enough path; carries achieved length."""

    def __init__(self, message: str, achieved: int = 0):
        super().__init__(message)
        self.achieved = achieved
