"""Exception hierarchy shared by every module of the package."""


class DunklError(Exception):
    """Base class for all errors raised by :mod:`dunklszasz`."""


class DunklRangeError(DunklError, OverflowError):
    """A quantity would leave the representable floating point range."""


class ConvergenceError(DunklError, RuntimeError):
    """A truncated series did not meet its tail criterion within the term cap."""


class DomainError(DunklError, ValueError):
    """An argument lies outside the domain on which an operator is defined."""


class RefusalError(DunklError, ValueError):
    """A bound or modulus was requested for a function lacking the needed metadata."""
