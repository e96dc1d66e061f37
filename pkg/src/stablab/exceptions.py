class NumericalToleranceError(ArithmeticError):
    """A result that theory guarantees valid failed numerical validation."""


class CalibrationError(RuntimeError):
    """No candidate convention reproduced the reference computation."""


class CapExceededError(ValueError):
    """Requested dimension exceeds an enumeration or memory cap."""
