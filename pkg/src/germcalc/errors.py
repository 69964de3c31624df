"""Exception hierarchy shared by every module."""


class GermError(Exception):
    """Base class for all germcalc errors."""


class DimensionError(GermError, ValueError):
    pass


class TruncationError(GermError, ValueError):
    """An operation needs coefficients beyond the stored truncation order."""


class DomainError(GermError, ValueError):
    """Input lies outside the domain of the operation (e.g. g(0) != 0)."""


class NotInvertibleError(DomainError):
    pass


class InvalidWeightError(GermError, ValueError):
    pass


class InconclusiveError(GermError):
    """A finite computation cannot certify the requested quantity."""


class NumericError(GermError, ArithmeticError):
    """A floating point procedure failed or lost confidence."""
