"""Exception hierarchy shared by every module."""


class BarbridgeError(Exception):
    """Base class for all library errors."""


class InputError(BarbridgeError, ValueError):
    """Malformed or inconsistent input data."""


class AssumptionViolation(BarbridgeError):
    """A standing uniqueness assumption does not hold for the data."""


class TrivialClassError(InputError):
    """The cycle handed to an extension bounds, so its class is zero."""


class TruncatedEnumeration(BarbridgeError):
    """An enumeration hit its cap while completeness was required."""
