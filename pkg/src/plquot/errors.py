"""Exception hierarchy.

Validation errors (bad input descriptions) and domain errors (valid input that
leaves the representable class, or violates an operation's precondition) are
kept apart so the CLI can map them onto distinct exit codes.
"""


class PLError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(PLError, ValueError):
    """A map description does not describe a valid bounded-slope PL map."""

    def __init__(self, message, *, index=None, line=None, column=None):
        super().__init__(message)
        self.message = message
        self.index = index
        self.line = line
        self.column = column

    def __str__(self):
        if self.line is None:
            return self.message
        if self.column is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, column {self.column}: {self.message}"


class NonMonotoneBreakpoints(ValidationError):
    pass


class NonPositiveSlope(ValidationError):
    pass


class GeometricConsistencyViolation(ValidationError):
    pass


class EmptyMap(ValidationError):
    pass


class PLSyntaxError(ValidationError):
    pass


class DomainError(PLError):
    """A well-formed request the mathematics (or the representation) rejects."""


class NegativeInput(DomainError, ValueError):
    pass


class TailNotClosed(DomainError):
    pass


class IncommensurableScales(DomainError):
    pass


class SlopeNotAboveOne(DomainError):
    pass


class AnchorBelowTailStart(DomainError):
    pass


class NotLinearTail(DomainError):
    pass


class InHNoWitness(DomainError):
    pass


class RejectionLimitExceeded(DomainError):
    pass
