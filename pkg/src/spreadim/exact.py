"""Closed-form spread and dimension values for reference shapes.

These are the exact curves the finite-sample engine is validated against:
the unit interval, the geodesic unit circle, and geodesic unit n-spheres.
All functions are scalar, pure and stateless.

Every formula is evaluated in a cancellation-safe form. In particular the
interval spread arctanh(sqrt(1 - e^-t)) / sqrt(1 - e^-t) is rewritten using
1 - x = e^-t / (1 + x), giving

    interval_spread(t) = (ln(1 + x) + t/2) / x,   x = sqrt(1 - e^-t)

which stays finite for large t where 1 - e^-t rounds to 1 and the textbook
form would hit arctanh(1).
"""

from __future__ import annotations

import math

from .errors import DomainError

# below this value of 1 - e^-t the interval formula is treated as its
# removable singularity and returns the limit value 1
_INTERVAL_GUARD = 1e-12

# sphere factor products switch to log space above this dimension
_LOG_PRODUCT_DIM = 20

_PI = math.pi


def _check_positive_scale(t: float) -> float:
    t = float(t)
    if not (t > 0.0) or math.isinf(t):
        raise DomainError(f"scale factor must be a finite positive number, got {t!r}")
    return t


def interval_spread(t: float) -> float:
    """Spread of the unit interval at scale t."""
    t = _check_positive_scale(t)
    x_sq = -math.expm1(-t)
    if x_sq < _INTERVAL_GUARD:
        return 1.0
    x = math.sqrt(x_sq)
    return (math.log1p(x) + 0.5 * t) / x


def interval_spread_derivative(t: float) -> float:
    """d/dt of the interval spread: (1 - e^-t * sigma(t)) / (2 (1 - e^-t)).

    Tends to 1/3 as t -> 0 (the mean distance of the interval) and to 1/2 as
    t -> infinity, matching the t/2 + ln 2 asymptote.
    """
    t = _check_positive_scale(t)
    x_sq = -math.expm1(-t)
    if x_sq < 1e-9:
        return 1.0 / 3.0
    return (1.0 - math.exp(-t) * interval_spread(t)) / (2.0 * x_sq)


def _check_sphere_dim(n: int) -> int:
    if not isinstance(n, (int,)) or isinstance(n, bool) or n < 1:
        raise DomainError(f"sphere dimension must be an integer >= 1, got {n!r}")
    return n


def sphere_spread(n: int, t: float) -> float:
    """Spread of the geodesic unit n-sphere at scale t.

    Three cases share two base factors: pi*t / (1 - e^-pi*t) for odd n and
    2 / (1 + e^-pi*t) for even n, times a finite product of (t/c)^2 + 1
    factors with c running over odd (n even) or even (n odd) integers.
    """
    n = _check_sphere_dim(n)
    t = _check_positive_scale(t)
    if n == 1:
        return _PI * t / -math.expm1(-_PI * t)
    if n % 2 == 0:
        base = 2.0 / (1.0 + math.exp(-_PI * t))
        constants = range(1, n + 1, 2)  # 1, 3, ..., n-1: one factor per i = 1..n/2
    else:
        base = _PI * t / -math.expm1(-_PI * t)
        constants = range(2, n, 2)  # 2, 4, ..., n-1: one factor per i = 1..(n-1)/2
    if n > _LOG_PRODUCT_DIM:
        log_prod = sum(math.log1p((t / c) ** 2) for c in constants)
        return base * math.exp(log_prod)
    prod = 1.0
    for c in constants:
        prod *= (t / c) ** 2 + 1.0
    return base * prod


def sphere_growth_dimension(n: int, t: float) -> float:
    """Analytic t * sigma'(t) / sigma(t) for the geodesic unit n-sphere."""
    n = _check_sphere_dim(n)
    t = _check_positive_scale(t)
    if n % 2 == 0:
        x = _PI * t
        slope = _PI / (math.exp(x) + 1.0) if x <= 700.0 else 0.0
        constants = range(1, n + 1, 2)
    else:
        slope = 1.0 / t - _safe_pi_over_expm1(t)
        constants = range(2, n, 2)
    for c in constants:
        slope += 2.0 * t / (c * c + t * t)
    return t * slope


def _safe_pi_over_expm1(t: float) -> float:
    # pi / (e^(pi t) - 1); e^(pi t) overflows past pi*t ~ 709 where the
    # quotient is far below double resolution anyway
    x = _PI * t
    if x > 700.0:
        return 0.0
    return _PI / math.expm1(x)


def circle_g_dimension(t: float) -> float:
    """Growth dimension of the geodesic unit circle: 1 - pi*t / (e^(pi*t) - 1).

    Strictly increasing from 0 at t -> 0 toward 1 as t -> infinity.
    """
    t = _check_positive_scale(t)
    return 1.0 - t * _safe_pi_over_expm1(t)


def circle_f_dimension(t: float) -> float:
    """Log-ratio dimension of the geodesic unit circle for t > 1.

    1 + (ln(pi) - ln(1 - e^(-pi*t))) / ln(t); decreases toward 1 as t grows.
    """
    t = float(t)
    if not (t > 1.0) or math.isinf(t):
        raise DomainError(f"circle_f_dimension requires a finite t > 1, got {t!r}")
    return 1.0 + (math.log(_PI) - math.log(-math.expm1(-_PI * t))) / math.log(t)


__all__ = [
    "circle_f_dimension",
    "circle_g_dimension",
    "interval_spread",
    "interval_spread_derivative",
    "sphere_growth_dimension",
    "sphere_spread",
]
