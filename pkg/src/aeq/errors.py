"""Exception hierarchy shared by every module."""


class AeqError(Exception):
    """Base class for all errors raised by :mod:`aeq`."""


class InvalidInputError(AeqError, ValueError):
    """Malformed or out-of-domain input (ragged rows, non-finite values, ...)."""


class PreconditionError(AeqError):
    """An operation was applied to a point set that does not satisfy its premise.

    ``witness`` carries the violating index triple when the premise is
    almost-equidistance.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class GeometricInfeasibilityError(AeqError):
    """Two spheres that should intersect do not."""


class ConstructionError(AeqError):
    """A closed-form generator failed to produce a valid point set."""


class BudgetExceededError(AeqError):
    """An exact search ran past its node limit."""


class NumericFailureError(AeqError):
    """The optimizer produced a non-finite value.

    ``last_points`` holds the last finite iterate.
    """

    def __init__(self, message, last_points=None):
        super().__init__(message)
        self.last_points = last_points
