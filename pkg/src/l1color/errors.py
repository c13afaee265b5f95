"""Exception types shared across the package."""


class L1ColorError(Exception):
    """Base class for domain errors raised by this package."""


class UnsupportedFormatError(L1ColorError):
    """Image file is not a PNG or JPEG."""


class CorruptImageError(L1ColorError):
    """Image file exists but cannot be decoded."""


class DimensionMismatchError(L1ColorError, ValueError):
    """Operands do not share the required dimensions."""


class DegenerateImageError(L1ColorError, ValueError):
    """Image too small for the requested operation (e.g. a single pixel)."""


class DegenerateNeighborhoodError(L1ColorError, ValueError):
    """Pixel has no neighbors (1x1 image)."""


class DegenerateSamplesError(L1ColorError, ValueError):
    """Sample set carries no usable variation (all equal, or all ~zero)."""


class NonFiniteError(L1ColorError, ValueError):
    """Input contains NaN or infinity."""


class NumericalBreakdownError(L1ColorError, RuntimeError):
    """Linear algebra failed even after regularization escalation."""


class SolverFailedError(L1ColorError, RuntimeError):
    """An LP or CG solve did not reach the requested accuracy."""

    def __init__(self, message: str, status: str = "failed"):
        super().__init__(message)
        self.status = status


class EmptyScribblesError(L1ColorError, ValueError):
    """Scribble set has no sites."""


class CountTooLargeError(L1ColorError, ValueError):
    """Requested more scribble sites than the image has pixels."""
