"""Generalized Mehler semigroup toolkit.

Computes semigroups P_t f(x) = int f(T_t x + y) mu_t(dy) driven by a drift
semigroup T_t and a skew-convolution family of probability measures mu_t,
their Gateaux derivatives through Fomin logarithmic derivatives, resolvents
and mild solutions, and empirical Hoelder/Zygmund regularity exponents for
the fractional-Laplacian, Ornstein-Uhlenbeck and Gross-type model families.
"""

from .errors import (ConfigError, DivergentMomentError, GridError,
                     MehlerError, QuadratureError, UnsupportedMethodError)
from .subordinator import (StableSubordinator, eta_density,
                           eta_density_scaled, fractional_moment,
                           sample_positive_stable)

__all__ = [
    "MehlerError", "QuadratureError", "DivergentMomentError", "GridError",
    "UnsupportedMethodError", "ConfigError",
    "StableSubordinator", "eta_density", "eta_density_scaled",
    "sample_positive_stable", "fractional_moment",
]

__version__ = "0.1.0"
