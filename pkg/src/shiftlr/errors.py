"""Exception types raised across the package."""


class ShiftLRError(Exception):
    pass


class ZeroMatrix(ShiftLRError, ValueError):
    """Raised when an operation needs a nonzero matrix."""


class DimensionMismatch(ShiftLRError, ValueError):
    pass


class DegenerateInput(ShiftLRError, ValueError):
    pass


class InvalidSpec(ShiftLRError, ValueError):
    pass


class TooLarge(ShiftLRError, ValueError):
    pass


class NoConvergence(ShiftLRError, RuntimeError):
    """Power iteration hit its cap. ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class IterationCapReached(ShiftLRError, RuntimeError):
    def __init__(self, message, shifts=None, trace=None):
        super().__init__(message)
        self.shifts = shifts
        self.trace = trace


class ParseError(ShiftLRError, ValueError):
    """Malformed or unreadable input file."""
