"""Exception types shared across the library."""


class FracgapError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FracgapError):
    """Invalid argument: outside a function's domain, bad range, bad parameter."""


class BudgetError(FracgapError):
    """A configured resource cap (breakpoints, memory, sieve limit) would be exceeded."""


class QuadratureError(FracgapError):
    """Adaptive integration failed to meet the requested tolerance.

    Carries the best estimate obtained and the achieved error bound so callers
    can decide whether the partial answer is still usable.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class CacheFormatError(FracgapError):
    """A prime-table cache file is malformed or has an unsupported version."""
