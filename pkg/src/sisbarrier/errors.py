class BarrierError(Exception):
    """Base class for errors raised by sisbarrier."""


class DomainError(BarrierError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class SingularityError(BarrierError, ArithmeticError):
    """A conditional quantity was requested while the barrier is certainly failed."""


class QuadratureError(BarrierError, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance."""

    def __init__(self, message: str, *, interval=None, depth=None, error_estimate=None):
        super().__init__(message)
        self.interval = interval
        self.depth = depth
        self.error_estimate = error_estimate


class OracleError(BarrierError, RuntimeError):
    """The Monte Carlo oracle could not produce a meaningful estimate."""


class ConfigError(BarrierError, ValueError):
    """A job configuration is malformed or inconsistent."""
