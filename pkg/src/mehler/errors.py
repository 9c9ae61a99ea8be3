"""Exception hierarchy. Numerical failures are always explicit, never silent."""


class MehlerError(Exception):
    """Base class for all library errors."""


class QuadratureError(MehlerError):
    """Adaptive quadrature exhausted its refinement budget above tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DivergentMomentError(MehlerError):
    """Requested moment lies outside the convergent window."""


class GridError(MehlerError):
    """Kernel grid too coarse or too small for the requested accuracy."""


class UnsupportedMethodError(MehlerError):
    """Evaluation method not available for this measure family."""


class ConfigError(MehlerError):
    """Experiment configuration failed to parse or validate."""
