"""Exception types raised across the package."""

from __future__ import annotations


class HMFError(Exception):
    """Base class for all package errors."""


class WeightMismatch(HMFError, ValueError):
    pass


class DenominatorMismatch(HMFError, ValueError):
    pass


class NotInvertible(HMFError, ZeroDivisionError):
    pass


class NotDivisible(HMFError):
    pass


class NoSquareRoot(HMFError):
    pass


class InconsistentSystem(HMFError):
    pass


class UnderdeterminedSystem(HMFError):
    pass


class NotInRing(HMFError):
    """The target is not an isobaric polynomial in the requested generators."""


class KappaInconsistency(HMFError):
    pass


class IterationCapExceeded(HMFError, RuntimeError):
    pass


class SingularAction(HMFError, ArithmeticError):
    pass
