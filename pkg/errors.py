"""Exception hierarchy shared by every package."""


class GeolipError(Exception):
    """Base class for all errors raised by this project"""


class NetworkFormatError(GeolipError, ValueError):
    """Malformed network document or network data"""


class DimensionMismatchError(NetworkFormatError):
    """Shapes of weights, biases, inputs or patterns do not chain"""


class NonFiniteError(NetworkFormatError):
    """NaN or infinite entry where a finite real is required"""


class UnsupportedActivationError(GeolipError):
    """Exact evaluation requested for an activation known only by its slope bounds"""


class MethodDepthError(GeolipError):
    """Method does not apply to a network of this depth"""


class CapExceededError(GeolipError):
    """Exhaustive enumeration would exceed its configured cap"""


class LmiShapeError(GeolipError, ValueError):
    """Inconsistent blocks in an affine matrix inequality"""


class RoundingInputError(GeolipError, ValueError):
    """Matrix handed to rounding is not a unit-diagonal solution of the right order"""


class InternalSolverError(GeolipError):
    """Solver output violates a property that holds by construction"""


class MatrixFormatError(GeolipError, ValueError):
    """Matrix file is not a finite, non-empty, rectangular 2-D array"""


class UnsupportedMethodError(GeolipError, ValueError):
    """Unknown method name, or a method asked for a norm it does not bound"""
