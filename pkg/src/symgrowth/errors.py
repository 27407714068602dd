"""Exception types shared across the package."""


class SymGrowthError(Exception):
    """Base class for all errors raised by this package."""


class InvalidElementError(SymGrowthError):
    """An encoding is not a valid element of the group it was used with."""


class InvalidGroupError(SymGrowthError):
    """A group specification is malformed or fails the group axioms."""


class GroupMismatchError(SymGrowthError):
    """Two operands belong to different group contexts."""


class EmptySetError(SymGrowthError):
    """An operation that requires a non-empty set received an empty one."""


class ParameterError(SymGrowthError):
    """A parameter is outside its documented range."""


class PairBudgetError(SymGrowthError):
    """A computation would exceed the configured pair budget."""

    def __init__(self, needed: int, budget: int):
        super().__init__(f"computation needs {needed} pairs, budget is {budget}")
        self.needed = needed
        self.budget = budget


class CertificateFormatError(SymGrowthError):
    """A certificate or report document is malformed."""


class InvariantViolation(SymGrowthError):
    """An inequality that is provably true failed on concrete data.

    This indicates a bug in the computation, never a property of the input.
    """
