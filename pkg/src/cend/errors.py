"""Exceptions shared across the package.

Every domain failure raises one of these; the CLI maps them to exit code 1
with a JSON error object on stderr, while malformed input surfaces as exit
code 2 before any of them is reached.
"""


class CendError(Exception):
    """Base class for all domain errors."""

    tag = "Error"

    def payload(self) -> dict:
        return {"error": self.tag, "message": str(self)}


class DimensionMismatchError(CendError):
    tag = "DimensionMismatch"


class NotUnimodularError(CendError):
    tag = "NotUnimodular"


class SingularMatrixError(CendError):
    tag = "SingularMatrix"


class NotDifferentialError(CendError):
    tag = "NotDifferential"


class InsufficientSamplesError(CendError):
    tag = "InsufficientSamples"


class NotClosedError(CendError):
    tag = "NotClosed"


class BoundTooSmallError(CendError):
    tag = "BoundTooSmall"
