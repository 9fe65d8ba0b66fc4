from typing import Optional

__all__ = [
    "RRDEError",
    "InvalidInputError",
    "InvalidRangeError",
    "InvalidParameterError",
    "InvalidInitialConditionError",
    "ShapeMismatchError",
    "VectorFieldError",
    "NonGeometricDriverError",
    "ConfigError",
    "InvariantViolation",
]


class RRDEError(Exception):
    """Base class for every error raised by this package"""


class InvalidInputError(RRDEError, ValueError):
    """Input failed a basic sanity check (grid, shape, sign)"""


class InvalidRangeError(InvalidInputError):
    """Grid index pair is not an ordered pair of valid indices"""


class InvalidParameterError(InvalidInputError):
    """Numerical parameter outside its admissible range"""


class InvalidInitialConditionError(InvalidInputError):
    """Starting point outside the closed domain"""


class ShapeMismatchError(InvalidInputError):
    """Two objects that must share a grid or a dimension do not"""


class VectorFieldError(InvalidInputError):
    """User-supplied derivative disagrees with finite differences"""


class NonGeometricDriverError(RRDEError):
    """Driver blocks fail the geometricity check and no override was given"""


class ConfigError(RRDEError):
    """Experiment configuration could not be parsed or validated"""


class InvariantViolation(RRDEError):
    def __init__(self, check: str, message: Optional[str] = None) -> None:
        self.check = check
        super().__init__(message or f"invariant check failed: {check}")
