"""Exception hierarchy for the fracorder package.

Every failure mode that callers are expected to handle gets its own class so
that the CLI can map them onto stable exit codes (validation failures exit
with 3, numerical failures with 4, refused inversions with 2).
"""

from __future__ import annotations


class FracorderError(Exception):
    """Base class for all package-specific errors."""


# ---------------------------------------------------------------------------
# Validation errors: the request itself is malformed or out of domain.
# ---------------------------------------------------------------------------


class DomainError(FracorderError):
    """A scalar parameter lies outside its mathematical domain."""


class BadOrder(FracorderError):
    """A fractional order is outside the interval the operation supports."""


class BadPayload(FracorderError):
    """Structured input (matrix, spectrum, sample array) fails validation."""


class GridMismatch(FracorderError):
    """Sampled data does not live on the grid an operation requires."""


class LengthMismatch(FracorderError):
    """Two arrays that must pair up elementwise have different lengths."""


class TimeNonpositive(FracorderError):
    """An evaluation time that must be strictly positive is not."""


class InsufficientSamples(FracorderError):
    """A sampled function has too few points for the requested operation."""


class UnsupportedOperator(FracorderError):
    """The operator description cannot support the requested operation."""


class StepTooLarge(FracorderError):
    """A finite-difference step would leave the valid order interval."""


class NotPositiveDefinite(FracorderError):
    """An operator has a nonpositive eigenvalue; the model requires lambda_1 > 0."""


class SpecError(FracorderError):
    """A problem-specification document fails schema validation."""


# ---------------------------------------------------------------------------
# Refusals: the request is well formed but provably unanswerable.
# ---------------------------------------------------------------------------


class NotAdmissible(FracorderError):
    """The observation lies outside the interval that guarantees a unique order."""


# ---------------------------------------------------------------------------
# Numerical errors: a well-posed computation failed to converge or certify.
# ---------------------------------------------------------------------------


class NonConvergence(FracorderError):
    """An iteration hit its budget before reaching the requested tolerance."""


class QuadratureFailure(FracorderError):
    """A quadrature result failed its internal convergence check."""


class NotMonotone(FracorderError):
    """The monotonicity certificate failed on the pre-scan grid."""


VALIDATION_ERRORS = (
    DomainError,
    BadOrder,
    BadPayload,
    GridMismatch,
    LengthMismatch,
    TimeNonpositive,
    InsufficientSamples,
    UnsupportedOperator,
    StepTooLarge,
    NotPositiveDefinite,
    SpecError,
)

NUMERICAL_ERRORS = (NonConvergence, QuadratureFailure, NotMonotone)
