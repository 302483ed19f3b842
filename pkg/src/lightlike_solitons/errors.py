"""
Error types raised by the lightlike_solitons library.

Every error carries a short machine-readable ``code`` so the command line can
report it and map it onto an exit status:
- DEGENERATE_METRIC: induced metric fails the non-degeneracy check
- OUT_OF_DOMAIN: evaluation point outside a family's natural domain
- STENCIL_OUT_OF_DOMAIN: finite-difference stencil leaves the domain
- INVALID_PARAM: family or profile parameters violate their hypotheses
- OUT_OF_RANGE: argument outside the range of an inverted function
- NO_CONVERGENCE: root finder exhausted its iteration budget
- INVALID_DESCRIPTOR: malformed family JSON or grid specification
"""


class SolitonError(Exception):
    """Base class for all library errors."""

    code = "SOLITON_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"{self.code}: {self.message}" if self.message else self.code


class DegenerateMetricError(SolitonError):
    code = "DEGENERATE_METRIC"


class OutOfDomainError(SolitonError):
    code = "OUT_OF_DOMAIN"


class StencilOutOfDomainError(SolitonError):
    code = "STENCIL_OUT_OF_DOMAIN"


class InvalidParamError(SolitonError, ValueError):
    code = "INVALID_PARAM"


class OutOfRangeError(SolitonError, ValueError):
    code = "OUT_OF_RANGE"


class NoConvergenceError(SolitonError, RuntimeError):
    code = "NO_CONVERGENCE"


class DescriptorError(SolitonError, ValueError):
    code = "INVALID_DESCRIPTOR"
