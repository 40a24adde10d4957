"""Exception types shared across the package."""


class QStirlingError(Exception):
    """Base class for all errors raised by this package."""


class NotDivisible(QStirlingError, ArithmeticError):
    """Exact Laurent polynomial division left a nonzero remainder."""


class InvalidParams(QStirlingError, ValueError):
    pass


class CapExceeded(QStirlingError, ValueError):
    """An enumeration was requested beyond its configured size cap."""


class InvalidLabel(QStirlingError, ValueError):
    pass


class InvalidPartition(QStirlingError, ValueError):
    pass


class UnknownIdentity(QStirlingError, KeyError):
    pass
