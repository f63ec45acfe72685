"""Exception hierarchy shared by every module of the package."""


class TraceKernelError(Exception):
    """Base class for all package errors."""


class DomainError(TraceKernelError, ValueError):
    """An argument lies outside the domain of an operation."""


class ShapeError(TraceKernelError, ValueError):
    """A word does not have the shape an operation requires."""


class ResourceError(TraceKernelError):
    """A requested enumeration or table exceeds its configured cap."""


class CertificationFailure(TraceKernelError):
    """A certificate check found a counterexample. Always a bug."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class KindMismatch(TraceKernelError, TypeError):
    pass


class DimensionMismatch(TraceKernelError, ValueError):
    pass


class SingularMatrix(TraceKernelError, ZeroDivisionError):
    pass


class ResampleExhausted(TraceKernelError):
    """Random sampling kept producing singular matrices."""


class VerificationFailure(TraceKernelError):
    def __init__(self, report):
        super().__init__(f"{report.check}: {report.outcome}")
        self.report = report


class ControlFailure(VerificationFailure):
    """A negative control never produced a nonzero value."""
