"""Exception types shared across the engines."""


class BfsimError(Exception):
    """Base class for all package errors."""


class InvalidModel(BfsimError):
    """Model failed validation and no override was requested."""


class LimitExceeded(BfsimError):
    """Backward expansion exceeded a configured safety limit."""


class OrderingViolation(BfsimError):
    """Internal assertion: an unassigned thinning mark was needed.

    This signals an engine bug; it is never expected on valid models.
    """


class CeilingViolated(BfsimError):
    """A thinning proposal saw an intensity above the dominating ceiling."""


class InsufficientData(BfsimError):
    """A statistical test was given fewer samples than it supports."""
