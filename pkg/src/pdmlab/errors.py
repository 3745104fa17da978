"""Exception hierarchy.

Validation problems derive from ``ValueError``; numerical breakdowns derive
from ``NumericalError`` (an ``ArithmeticError``).  The CLI maps the first
family to exit code 1 and the second to exit code 2.
"""


class PdmError(Exception):
    """Base class for every error raised by pdmlab."""


class ValidationError(PdmError, ValueError):
    pass


class ParseError(ValidationError):
    """Malformed mass-profile expression.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} (at position {position})")


class ConstraintError(ValidationError):
    """Ordering parameters violate the von Roos constraint."""


class DomainError(ValidationError):
    """An argument lies outside the region where an object is defined."""


class BoundaryError(ValidationError):
    """A test function is not negligible at the box edges."""


class NoPeriodError(ValidationError):
    """Trajectory does not oscillate."""


class NumericalError(PdmError, ArithmeticError):
    pass


class ConvergenceError(NumericalError):
    pass


class EscapeError(NumericalError):
    """Classical trajectory left the mass profile domain."""

    def __init__(self, message: str, time: float):
        self.time = time
        super().__init__(message)


class DriftError(NumericalError):
    """Energy drift of an integrated trajectory exceeds the audit tolerance."""
