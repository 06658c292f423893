"""Exception hierarchy; every error knows the CLI exit code it maps to."""
from typing import Optional


class SymSteerError(Exception):
    """Base class for all library errors"""

    exit_code = 3


class SpecParseError(SymSteerError):
    """State-spec string does not follow the grammar"""

    exit_code = 2


class InvalidInputError(SymSteerError, ValueError):
    """Argument outside its documented domain"""

    exit_code = 2


class SizeError(InvalidInputError):
    """Problem size above a configured guard rail"""


class NumericalError(SymSteerError):
    """A numerical routine could not produce a trustworthy result"""

    exit_code = 3


class ConvergenceError(NumericalError):
    """Iterative solver gave up; carries the worst residual seen"""

    def __init__(self, message: str, worst_residual: Optional[float] = None):
        if worst_residual is not None:
            message = f"{message} (worst residual {worst_residual:.3e})"
        super().__init__(message)
        self.worst_residual = worst_residual


class NonPhysicalSpectrumError(NumericalError):
    """Spectrum or eigenvector structure impossible for a physical state"""


class NumericalValidityError(NumericalError):
    """Intermediate quantity fails a validity check beyond tolerance"""


class DegenerateSteeringError(NumericalError):
    """Measurement outcome has vanishing probability"""


class SingularVolumeError(NumericalError):
    """Normalized volume diverges (pure marginal with non-vanishing det)"""


class ScaleError(NumericalError):
    """Root magnitude too large to be represented reliably"""


class OutputError(SymSteerError):
    """Output path cannot be written"""

    exit_code = 4


class DomainError(SymSteerError):
    """Input is valid but outside the family an operation applies to"""

    exit_code = 5


class NotDistinctSpinorsError(DomainError):
    """State is not in D_{1,1,...,1}"""
