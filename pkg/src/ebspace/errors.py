"""Exception hierarchy shared by all modules."""


class EBSpaceError(Exception):
    """Base class for every error raised by :mod:`ebspace`."""


class DimensionError(EBSpaceError, ValueError):
    """Declared subsystem dimensions do not match the data."""


class ValidationError(EBSpaceError, ValueError):
    """An input violates a type invariant (hermiticity, normalization, ...)."""


class EmptySpaceError(EBSpaceError, ValueError):
    """An operation produced a zero-dimensional subspace."""


class DomainError(EBSpaceError, ValueError):
    """Parameters lie outside the admissible domain of a construction."""


class PreconditionError(EBSpaceError, ValueError):
    """A routine was called outside the case it is designed for."""


class SingularReductionError(EBSpaceError, ArithmeticError):
    """A normal-form reduction hit a numerically singular step."""


class SingularTimeError(EBSpaceError, ArithmeticError):
    """The Tavis-Cummings parameter map is undefined at this time."""


class CertificateError(EBSpaceError, ValueError):
    """A quantity is requested that the supplied certificate does not establish."""
