"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition (bad kernel, bad vertex, ...)."""


class DegenerateError(ValueError):
    """A quantity needed for the computation is zero (e.g. conditioning on a null event)."""


class EnumerationLimitError(ValueError):
    """Exhaustive enumeration was requested beyond its configured budget."""


class VerificationError(AssertionError):
    """An oracle-backed check failed."""
