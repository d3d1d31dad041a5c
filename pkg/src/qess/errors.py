"""Exception types raised across the package."""


class QessError(Exception):
    """Base class for all package errors."""


class ConstraintViolation(QessError, ValueError):
    """A game fails the constrained-family conditions s=t, r=u, (r-t)>0."""

    def __init__(self, clause, message=None):
        self.clause = clause
        super().__init__(message or f"constraint {clause} violated")


class NonFiniteInput(QessError, ValueError):
    pass


class RangeError(QessError, ValueError):
    """A strategy angle or entanglement level lies outside its allowed interval."""


class NormalizationError(QessError, ArithmeticError):
    pass


class EmptySweep(QessError, ValueError):
    pass


class ParameterError(QessError, ValueError):
    pass


class NegativeContribution(QessError, ValueError):
    pass
