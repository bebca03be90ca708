"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed polynomial, stabilizer or circuit text."""


class ExponentOverflowError(ArithmeticError):
    """A polynomial exceeded the configured exponent span limit."""


class WindowTooSmallError(ValueError):
    """A finite window is too small for the code or circuit memory."""


class PreconditionError(ValueError):
    """Input violates a structural precondition (commutation, rank, shape).

    Carries an optional witness, e.g. the (row_i, row_j, value) triple of a
    failed commutation check.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NonClearableError(RuntimeError):
    """An entry required by the reduction is not clearable.

    Raised when a quotient that must be a Laurent polynomial is not, or when
    a diagonal residue is not of the symmetric shape the phase gates can
    cancel.  Signals an input violating the self-orthogonality or full-rank
    preconditions.
    """


class LoopLimitError(RuntimeError):
    """The degree-reduction loop exceeded its iteration budget.

    The budget is derived from the initial degree measure; exceeding it
    indicates an implementation fault and is surfaced rather than hidden.
    """
