"""Semantic exception hierarchy shared across the package."""


class WfgcpeError(Exception):
    """Base class for all package-specific errors."""


class DomainError(WfgcpeError):
    """An argument lies outside the mathematical domain of the operation."""


class NonConvergence(WfgcpeError):
    """Numerical integration exhausted its budget with error above tolerance."""

    def __init__(self, message, value=None, abs_error=None):
        super().__init__(message)
        self.value = value
        self.abs_error = abs_error


class ConstraintError(WfgcpeError):
    """A closed form was requested outside its convergence constraints."""


class UnboundedSupport(WfgcpeError):
    """The operation requires a finite right support endpoint."""


class DegenerateNormalizer(WfgcpeError):
    """The weighted cumulative past entropy used as normalizer is zero."""


class MonotonicityError(WfgcpeError):
    """A function required to be strictly increasing fails on a probe grid."""


class PreconditionUnmet(WfgcpeError):
    """A verifier's hypothesis (an ordering, a monotonicity) does not hold."""


class ParseError(WfgcpeError):
    """A data file could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class ValidationError(WfgcpeError):
    """A parsed sample violates the sample invariants."""


class WeightAntiderivativeUnavailable(WfgcpeError):
    """No antiderivative is available or constructible for the weight."""
