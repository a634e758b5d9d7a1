"""Exception types shared across the package.

The CLI maps these onto its exit codes: validation problems (bad input,
parameter-range violations, unverified invariants, inadmissible states)
are distinct from numerical failures (poles, non-convergence).
"""


class ShapeInvError(Exception):
    """Base class for all package errors."""


class ValidationError(ShapeInvError):
    """Invalid input: bad expression, bad config, out-of-range parameter."""


class ExpressionError(ValidationError):
    """Invariant-expression parse failure; carries the byte offset."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class RangeViolation(ValidationError):
    """A family parameter range does not hold; names the violated inequality."""


class UnverifiedInvariant(ValidationError):
    """ConstructionData carries an expression not marked translation-invariant."""


class InadmissibleState(ValidationError):
    """Requested level index k lies outside the admissible range."""


class NumericalError(ShapeInvError):
    """Evaluation failure: domain error, pole, denominator zero, divergence."""


class EvalDomainError(NumericalError):
    """ln of a non-positive value, sqrt of a negative, division by zero."""


class GammaPole(NumericalError):
    """Gamma evaluated at a non-positive integer."""


class DenominatorZero(NumericalError):
    """An extension denominator vanishes at (or too close to) the point."""

    def __init__(self, message: str, location: float | None = None):
        super().__init__(message)
        self.location = location


class NonConvergence(NumericalError):
    """An adaptive numerical routine exhausted its refinement budget."""
