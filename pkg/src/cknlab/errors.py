"""Exception hierarchy shared by every module of the package."""


class CKNError(Exception):
    """Base class for all errors raised by cknlab."""


class InadmissibleParams(CKNError, ValueError):
    pass


class DegenerateExponent(CKNError, ValueError):
    pass


class DomainError(CKNError, ValueError):
    pass


class OrderMismatch(CKNError, ValueError):
    pass


class OrderUnderflow(CKNError, ValueError):
    pass


class NonPositiveField(CKNError, ValueError):
    pass


class UnnormalizedSpec(CKNError, ValueError):
    pass


class SpreadTooLarge(CKNError, RuntimeError):
    pass


class NotConstant(CKNError, RuntimeError):
    pass


class QuadratureFailure(CKNError, RuntimeError):
    pass


class QOutOfRange(CKNError, ValueError):
    pass


class NoConvergence(CKNError, RuntimeError):
    pass


class NoDecayFound(CKNError, RuntimeError):
    pass


class NotConverged(CKNError, RuntimeError):
    """Raised by strict minimizer runs; carries the partial report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ZeroField(CKNError, ValueError):
    pass
