"""Exception types raised across the package."""


class ParabolicError(Exception):
    pass


class SingularMatrix(ParabolicError, ValueError):
    pass


class NotParabolic(ParabolicError, ValueError):
    pass


class FixesInfinity(ParabolicError, ValueError):
    """The map has c = 0; use the translation path instead."""


class FixedPointInput(ParabolicError, ValueError):
    pass


class InvalidEpsilon(ParabolicError, ValueError):
    pass


class HorizonTooShort(ParabolicError, ValueError):
    pass


class OutOfBasin(ParabolicError, ValueError):
    pass


class NoEscape(ParabolicError, RuntimeError):
    pass


class LemmaViolation(ParabolicError, AssertionError):
    """An interval-image prediction failed. Indicates a bug, not bad input."""
