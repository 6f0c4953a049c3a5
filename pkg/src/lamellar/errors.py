"""Exception types shared across the package.

Parameter/domain problems derive from ValueError (CLI exit code 2),
numerical failures derive from ArithmeticError (CLI exit code 3).
"""


class DomainError(ValueError):
    """A parameter is outside its admissible range."""


class SingularityError(DomainError):
    """Evaluation requested too close to a kernel singularity."""


class RangeError(DomainError):
    """A primitive was asked to integrate across more than one period."""


class OrderingError(ValueError):
    """Interface positions collided or left the unit interval."""


class DetectionError(ArithmeticError):
    """Too few sign changes to extract the requested step profile."""


class NotCriticalError(ArithmeticError):
    """Lagrange residual too large: the profile is not a critical point."""


class NoBracketError(ArithmeticError):
    """Bisection could not bracket a sign change."""


class StepFailureError(ArithmeticError):
    """Gradient-flow step rejected after the maximum number of halvings."""


class LineSearchError(ArithmeticError):
    """Backtracking line search failed to reduce the energy."""
