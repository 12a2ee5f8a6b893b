"""Exception types shared across the package."""

from __future__ import annotations


class NonPrimeCharacteristic(ValueError):
    pass


class SizeCapExceeded(RuntimeError):
    """A requested enumeration exceeds the configured element cap."""


class LayerMismatch(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class NotInSubfield(ValueError):
    pass


class AmbientMismatch(ValueError):
    pass


class TowerMismatch(ValueError):
    pass


class DuplicateExponent(ValueError):
    pass


class ExponentOutOfRange(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class NonInvertibleMap(ValueError):
    pass


class NotMaximumHScattered(ValueError):
    pass


class NotPseudoregulusType(RuntimeError):
    pass


class TransversalCountMismatch(NotPseudoregulusType):
    pass


class NoValidTheta(RuntimeError):
    pass


class SpreadAxiomViolation(RuntimeError):
    pass


class CrossCheckError(RuntimeError):
    """Two independent computations of the same quantity disagreed."""
