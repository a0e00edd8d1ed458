"""Exception types shared across the package."""


class DnmodError(Exception):
    """Base class for all package errors."""


class RingError(DnmodError, ArithmeticError):
    """Arithmetic not defined in the coefficient ring (non-invertible element, mismatch)."""


class SeriesError(DnmodError, ValueError):
    """Power-series precondition violated (constant term, valuation, ...)."""


class CurveError(DnmodError, ValueError):
    """Bad prime, singular curve, point not on curve, non-root base point."""


class RegistryError(DnmodError, KeyError):
    """Unknown table id or malformed registry record."""


class CostGuardError(DnmodError, ValueError):
    """Requested computation exceeds the supported size."""
