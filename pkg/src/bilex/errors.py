"""Exception types shared by every module."""


class BilexError(Exception):
    """Base class for all library errors."""


class ParameterError(BilexError, ValueError):
    """Arguments violate a precondition (mismatched fields, bad orders, k out of range)."""


class DomainError(BilexError, ArithmeticError):
    """Operation undefined at this input, e.g. inverting zero or x(O)."""


class CapacityError(BilexError):
    """Requested enumeration exceeds the desk-scale caps."""
