"""Exception types raised across the package.

Input problems derive from ``ValueError``; numerical breakdowns derive from
``NumericalFailure`` so the CLI can map them to a distinct exit status.
"""


class IsoheatError(Exception):
    """Base class for every error raised by isoheat."""


class UnsupportedDomain(IsoheatError, ValueError):
    """Domain outside the closed-form spectral families."""


class UnsupportedConfiguration(IsoheatError, ValueError):
    """Formula requested for a boundary-condition pattern it does not cover."""


class InvalidAngle(IsoheatError, ValueError):
    pass


class InvalidRatio(IsoheatError, ValueError):
    pass


class NonpositiveTime(IsoheatError, ValueError):
    pass


class IllConditionedFit(IsoheatError, ValueError):
    pass


class DegenerateGroundState(IsoheatError, ValueError):
    """Lowest eigenvalue is not simple, so the one-term large-time law does not apply."""


class WindowViolation(IsoheatError, ValueError):
    """Flow parameter outside its admissibility window."""


class NumericalFailure(IsoheatError, RuntimeError):
    pass


class WindowOutOfRange(NumericalFailure):
    """Exponential remainders too large in the requested time window."""


class BracketFailure(NumericalFailure):
    pass


class ToleranceNotMet(NumericalFailure):
    pass


class SolverFailure(NumericalFailure):
    pass
