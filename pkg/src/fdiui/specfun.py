"""Exponential integrals for the Rayleigh-fading rate bounds.

Only real positive arguments are supported.  ``E1(x) = -Ei(-x)`` is
evaluated with its power series for ``x <= 1`` and a modified-Lentz
continued fraction above that.
"""

import math

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286060651209008240243

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 500


def _check(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"exponential integral needs a finite x > 0, got {x!r}")
    return x


def _series(x: float) -> float:
    # E1(x) = -gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k k!)
    total = 0.0
    term = 1.0
    for k in range(1, _MAX_ITER):
        term *= -x / k
        contrib = -term / k
        total += contrib
        if abs(contrib) < _EPS * abs(total):
            break
    return -EULER_GAMMA - math.log(x) + total


def _continued_fraction(x: float) -> float:
    """Return exp(x) * E1(x) for x > 1."""
    b = x + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"E1 continued fraction did not converge at x={x}")


def exp_integral_e1(x: float) -> float:
    """Exponential integral ``E1(x) = int_x^inf exp(-t)/t dt`` for ``x > 0``."""
    x = _check(x)
    if x <= 1.0:
        return _series(x)
    return _continued_fraction(x) * math.exp(-x)


def exp_integral_ei_neg(x: float) -> float:
    """``Ei(-x)`` for ``x > 0``; always negative."""
    return -exp_integral_e1(x)


def exp_scaled_e1(x: float) -> float:
    """``exp(x) * E1(x)`` without overflow for large ``x``.

    This is the factor that appears as ``-exp(a) Ei(-a)`` in the
    unsuppressed-interference rate bound; it tends to ``1/x`` as ``x``
    grows.
    """
    x = _check(x)
    if x <= 1.0:
        return math.exp(x) * _series(x)
    return _continued_fraction(x)
