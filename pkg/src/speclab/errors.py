"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SpeclabError(Exception):
    """Base class for all errors raised by speclab."""


class ConvergenceError(SpeclabError):
    """An iteration hit its cap before meeting its tolerance."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class ExpmOverflowError(SpeclabError, OverflowError):
    def __init__(self, message, norm):
        super().__init__(message)
        self.norm = norm


class NearSingularError(SpeclabError):
    """The shifted system zI - M is (numerically) singular."""

    def __init__(self, message, distance):
        super().__init__(message)
        self.distance = distance


class IllConditionedError(SpeclabError):
    pass


class DomainError(SpeclabError, ValueError):
    pass


class HypothesisError(SpeclabError):
    """A theorem's hypothesis is not satisfied by the supplied data."""


class BudgetError(SpeclabError):
    """An error budget cannot be met with the configured cutoff."""

    def __init__(self, message, suggested_cutoff=None):
        super().__init__(message)
        self.suggested_cutoff = suggested_cutoff


class InternalConsistencyError(SpeclabError):
    pass


class AmbiguityError(SpeclabError):
    pass


class MalformedInputError(SpeclabError, ValueError):
    pass
