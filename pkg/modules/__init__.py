"""
PWG Modules - Pseudoweight growth-rate components and their shared error types
"""

from typing import Any, Optional


class PseudoweightError(Exception):
    """Base class for all errors raised by the PWG modules"""

    exit_code = 2


class DimensionError(PseudoweightError):
    """Operands live in different numbers of variables"""


class IndexOutOfRangeError(PseudoweightError):
    """A variable index is outside 1..M"""


class DomainError(PseudoweightError):
    """Input lies outside the mathematical domain of an operation"""


class UndefinedWeightError(DomainError):
    """AWGN-pseudoweight requested for the all-zero vector"""


class ResourceLimitError(PseudoweightError):
    """An exhaustive computation would exceed its configured cap"""


class SolverFailure(PseudoweightError):
    """Newton iteration did not converge"""

    exit_code = 3

    def __init__(self, message: str, last_iterate: Optional[Any] = None, starts: Optional[list] = None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.starts = starts or []


class SweepError(PseudoweightError):
    """Every grid point of a sweep failed"""

    exit_code = 3


class NoThresholdError(PseudoweightError):
    """No sign change of the growth rate was found in the scanned range"""

    exit_code = 0

    def __init__(self, message: str, summary: Optional[dict] = None):
        super().__init__(message)
        self.summary = summary or {}


__all__ = [
    'PseudoweightError', 'DimensionError', 'IndexOutOfRangeError', 'DomainError',
    'UndefinedWeightError', 'ResourceLimitError', 'SolverFailure', 'SweepError',
    'NoThresholdError'
]
