"""Exception types shared across the package."""


class GershoqError(Exception):
    """Base class for all library errors."""


class InvalidInterval(GershoqError):
    """Interval endpoints are out of order (a > b)."""


class InvalidParameter(GershoqError):
    """A parameter violates its documented range."""


class QuadratureFailure(GershoqError):
    """Adaptive quadrature did not reach the requested tolerance.

    Carries the achieved absolute error estimate in ``achieved``.
    """

    def __init__(self, message, achieved=float("inf")):
        super().__init__(message)
        self.achieved = achieved


class EmptyCell(GershoqError):
    """The cell carries no probability mass."""


class InvalidTarget(GershoqError):
    """Requested per-cell moment target is negative."""


class TargetTooLarge(GershoqError):
    """Per-cell moment target exceeds the remaining tail moment."""


class ConstructionFailure(GershoqError):
    """The outer solve could not bracket or locate the equal-moment target.

    ``diagnostics`` holds a human-readable account of the failure.
    """

    def __init__(self, message, diagnostics=""):
        super().__init__(message)
        self.diagnostics = diagnostics


class DegenerateCell(GershoqError):
    """A Lloyd cell lost all mass; ``index`` is the offending cell."""

    def __init__(self, message, index=-1):
        super().__init__(message)
        self.index = index


class InfiniteZadorConstant(GershoqError):
    """The density integral for the high-rate constant diverges."""
