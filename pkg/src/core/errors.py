"""
Error hierarchy for RootBound.

Every failure the toolkit raises derives from RootBoundError and from the
matching built-in type, so callers that already catch ValueError or
RuntimeError keep working.

EXIT-CODE CONTRACT (enforced by src.cli.main):
    InputError       -> exit 1 (malformed input, dimension mismatch)
    HypothesisError  -> exit 2 (bound or certificate not established)
    ConvergenceError, ConsistencyError -> exit 3 (internal numerical failure)
"""

from typing import Any, Optional


class RootBoundError(Exception):
    """Base class for all toolkit errors."""


# ============================================================================
# INPUT ERRORS (exit 1)
# ============================================================================

class InputError(RootBoundError, ValueError):
    """Input could not be accepted as given."""


class MatrixFormatError(InputError):
    """Matrix text or array is malformed (shape, non-finite entry, bad token)."""


class PartitionError(InputError):
    """Partition blocks are not a valid ordered set partition."""


class DimensionError(InputError):
    """Operands have incompatible shapes."""


class NegativeEntryError(InputError):
    """A nonnegative matrix was required."""


class BudgetExceededError(InputError):
    """Candidate enumeration exceeded the configured budget."""


class NotStaircaseError(InputError):
    """Matrix is not a member of the staircase class S*(n,e)."""


# ============================================================================
# HYPOTHESIS ERRORS (exit 2)
# ============================================================================

class HypothesisError(RootBoundError, ValueError):
    """
    Hypotheses of a bound do not hold; the bound is NOT established.

    The failing check (HypothesisCheck, RootednessCheck, ...) travels with
    the exception so reports can list every violation.
    """

    def __init__(self, message: str, check: Optional[Any] = None):
        super().__init__(message)
        self.check = check


class NotRootedError(HypothesisError):
    """A matrix that must be rooted has no valid shift witness."""


class CertificateError(HypothesisError):
    """A comparison certificate failed one of its conditions."""


# ============================================================================
# NUMERICAL FAILURES
# ============================================================================

class ConvergenceError(RootBoundError, RuntimeError):
    """Dense eigensolver did not converge."""


class ConsistencyError(RootBoundError, AssertionError):
    """Two independent computations of the same quantity disagree."""
